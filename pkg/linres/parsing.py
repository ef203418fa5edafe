""" shared helpers for the line-oriented file formats (instances, proofs, derivations) """

from linres.errors import ParseError


def content_lines(text):
    """Yield (line number, tokens) for every non-blank, non-comment line. Numbers are 1-based."""
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


def parse_int(token, lineno, what="integer"):
    try:
        return int(token)
    except ValueError:
        raise ParseError(f"expected {what}, got {token!r}", lineno) from None


def parse_residue(token, p, lineno):
    value = parse_int(token, lineno, "residue")
    if not 0 <= value < p:
        raise ParseError(f"residue {value} outside [0, {p})", lineno)
    return value


def parse_row(tokens, n, p, lineno):
    """`c_0 ... c_{n-1} | rhs` -> (coeffs, rhs)."""
    if len(tokens) != n + 2 or tokens[n] != "|":
        raise ParseError(f"expected {n} coefficients, '|' and a right-hand side", lineno)
    coeffs = tuple(parse_residue(t, p, lineno) for t in tokens[:n])
    return coeffs, parse_residue(tokens[n + 1], p, lineno)


def format_row(coeffs, rhs):
    return " ".join(str(c) for c in coeffs) + f" | {rhs}"


def expect_header(lines, keyword, lineno_hint=None):
    """Pop the next line and require it to be `keyword <int>`."""
    try:
        lineno, tokens = next(lines)
    except StopIteration:
        raise ParseError(f"missing '{keyword}' header", lineno_hint) from None
    if len(tokens) != 2 or tokens[0] != keyword:
        raise ParseError(f"expected '{keyword} <int>'", lineno)
    return lineno, parse_int(tokens[1], lineno)
