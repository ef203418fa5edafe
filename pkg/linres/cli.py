""" command-line surface: linres <subcommand> [flags]

exit codes: 0 success / accept / true, 1 reject / false / satisfiable, 2 usage or library error.
Results go to standard output or -o files; logs go to standard error.
"""

import argparse
import logging
import sys

from linres.clausal import check_reslin, check_reslin_neq, instance_clauses, read_derivation
from linres.config import DEFAULT_JOBS, DEFAULT_MAX_ROUNDS, RunConfig
from linres.errors import LinresError, MalformedProof, NeverReached
from linres.games import GameKind, GameTask, lower_bound_delayer, make_prover, play_game, play_paired, sweep, write_summary_csv
from linres.instances import (
    GENERATOR_KINDS,
    EccInstance,
    code_distance,
    format_instance,
    gen_instance,
    read_instance,
    write_manifest,
    zero_one_image,
    zero_one_sat,
)
from linres.lemmas import TRIALS, run_trials, write_trials_csv
from linres.parsing import format_row
from linres.refutations import build_decision_tree, build_layered_refutation, check_refutation, format_refutation, read_refutation
from linres.robustness import layered_size_consistency, path_witness, probe_min_unsat, robustness_profile, verify_witness, write_profile_csv

logger = logging.getLogger("linres")


def _emit(text, path=None):
    if path is None:
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(text)


# SUBCOMMANDS

def cmd_gen(args, config):
    inst = gen_instance(args.kind, config.p, config.n, config.k, config.min_d or 0, config.seed, budget=config.budget)
    _emit(format_instance(inst.system), config.output_path)
    if config.manifest_path:
        write_manifest(inst, config.manifest_path, config.output_path)
    return 0


def cmd_distance(args, config):
    print(code_distance(read_instance(config.instance_path).A, config.budget))
    return 0


def cmd_image(args, config):
    image = zero_one_image(read_instance(config.instance_path).A, config.budget)
    missing = image.first_missing()
    print(f"size {len(image)}")
    print("missing " + ("none" if missing is None else " ".join(str(c) for c in missing)))
    return 0


def cmd_sat(args, config):
    witness = zero_one_sat(read_instance(config.instance_path), config.budget)
    if witness is None:
        print("unsat")
        return 0
    print("sat " + " ".join(str(v) for v in witness))
    return 1


def cmd_check(args, config):
    inst = read_instance(config.instance_path)
    try:
        verdict = check_refutation(read_refutation(config.proof_path), inst, config.budget)
    except MalformedProof as exc:
        print(f"reject structure: {exc}")
        return 1
    print(verdict)
    return 0 if verdict else 1


def cmd_check_clausal(args, config):
    inst = read_instance(config.instance_path)
    derivation = read_derivation(config.proof_path)
    try:
        if derivation.calculus == "reslin":
            verdict = check_reslin(derivation, instance_clauses(inst))
        else:
            verdict = check_reslin_neq(derivation, inst, from_inputs=args.from_inputs)
    except MalformedProof as exc:
        print(f"reject structure: {exc}")
        return 1
    print(verdict)
    return 0 if verdict else 1


def cmd_build_layered(args, config):
    inst = read_instance(config.instance_path)
    order = args.order or None
    if args.tree:
        proof = build_decision_tree(inst, order, config.budget)
    else:
        proof = build_layered_refutation(inst, order, config.budget)
    logger.info("built %s refutation with %d nodes", proof.kind, proof.size)
    _emit(format_refutation(proof), config.output_path)
    return 0


def cmd_play(args, config):
    system = read_instance(config.instance_path)
    d = EccInstance.from_system(system, budget=config.budget).d
    kind = GameKind(args.game)

    if args.games > 1 or args.csv:
        tasks = [
            GameTask(system, d, config.seed + i, args.prover, kind, args.max_rounds, config.budget, config.strategy)
            for i in range(args.games)
        ]
        rows = [row for _, row in sweep(tasks, config.jobs)]
        if args.csv:
            with open(args.csv, "w", encoding="utf-8", newline="") as f:
                write_summary_csv(rows, f)
        else:
            write_summary_csv(rows, sys.stdout)
        return 0

    prover = make_prover(args.prover, kind)
    inner = lower_bound_delayer(system, d, config.budget, **config.strategy)
    if kind == GameKind.LINTREES:
        transcript = play_game(system, prover, inner, kind, config.seed, args.max_rounds, config.budget)
    else:
        transcript, shadow = play_paired(system, prover, inner, config.seed, args.max_rounds, config.budget)
        logger.info("shadow lintrees game: %d rounds, %d branchings", len(shadow), shadow.branchings)
    _emit(transcript.format(), config.output_path)
    return 0


def cmd_verify_lemma(args, config):
    rows = run_trials(args.lemma, args.trials, config.seed, args.timing)
    if config.output_path:
        with open(config.output_path, "w", encoding="utf-8", newline="") as f:
            failures = write_trials_csv(rows, f, args.timing)
    else:
        failures = write_trials_csv(rows, sys.stdout, args.timing)
    if failures:
        logger.warning("%s: %d of %d trials failed", args.lemma, failures, args.trials)
    return 1 if failures else 0


def cmd_robustness_scan(args, config):
    inst = read_instance(config.instance_path)
    out = open(config.output_path, "w", encoding="utf-8", newline="") if config.output_path else sys.stdout
    try:
        if args.probe:
            out.write("s,support,values,min_equations\n")
            for s in range(args.s_max + 1):
                for row in probe_min_unsat(inst, s, config.budget):
                    support = " ".join(str(j) for j in sorted(row.rho.support))
                    values = " ".join(str(v) for _, v in row.rho.bindings)
                    found = "none" if row.min_equations is None else row.min_equations
                    out.write(f"{s},{support},{values},{found}\n")
            return 0
        profile = robustness_profile(inst, args.s_max, config.budget)
        write_profile_csv(profile, out)
    finally:
        if out is not sys.stdout:
            out.close()
    ok = (
        profile.consistent()
        and all(verify_witness(inst, row, config.budget) for row in profile.rows)
        and layered_size_consistency(inst, profile, config.budget)
    )
    return 0 if ok else 1


def cmd_path_witness(args, config):
    proof = read_refutation(config.proof_path)
    try:
        witness = path_witness(proof, args.point, args.s, config.budget)
    except NeverReached as exc:
        print(f"never reached: {exc}")
        return 1
    lines = [f"node {witness.node}", f"depth {witness.depth}", f"rho {witness.rho_hat}"]
    preimage = witness.preimage
    lines += ["eq " + format_row(preimage.A.row(i), preimage.b[i]) for i in range(preimage.k)]
    print("\n".join(lines))
    return 0


COMMANDS = {
    "gen": cmd_gen,
    "distance": cmd_distance,
    "image": cmd_image,
    "sat": cmd_sat,
    "check": cmd_check,
    "check-clausal": cmd_check_clausal,
    "build-layered": cmd_build_layered,
    "play": cmd_play,
    "verify-lemma": cmd_verify_lemma,
    "robustness-scan": cmd_robustness_scan,
    "path-witness": cmd_path_witness,
}


# PARSER

def build_parser():
    parser = argparse.ArgumentParser(prog="linres", description="Res(lin) over F_p: instances, refutations, games, lemma checks")
    parser.add_argument("--budget", type=int, default=None, help="max elements per brute-force enumeration (env LINRES_BUDGET)")
    parser.add_argument("--jobs", type=int, default=DEFAULT_JOBS)
    parser.add_argument("--log-level", default="WARNING", choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    sub = parser.add_subparsers(dest="command", required=True)

    def with_instance(p):
        p.add_argument("-i", "--instance", required=True)

    gen = sub.add_parser("gen", help="generate a 0-1 unsatisfiable instance")
    gen.add_argument("--kind", choices=sorted(GENERATOR_KINDS), default="rs")
    gen.add_argument("--p", type=int, required=True)
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--k", type=int, required=True)
    gen.add_argument("--min-d", type=int, default=0)
    gen.add_argument("--seed", type=int)
    gen.add_argument("-o", "--output")
    gen.add_argument("--manifest")

    for name, text in (("distance", "code distance of A"), ("image", "0-1 image of A"), ("sat", "0-1 satisfiability")):
        with_instance(sub.add_parser(name, help=text))

    check = sub.add_parser("check", help="check a splitting refutation")
    with_instance(check)
    check.add_argument("-P", "--proof", required=True)

    clausal = sub.add_parser("check-clausal", help="check a Res(lin) or Res(lin!=) derivation")
    with_instance(clausal)
    clausal.add_argument("-P", "--proof", required=True)
    clausal.add_argument("--from-inputs", action="store_true", help="Res(lin!=): derive from the instance clauses instead of refuting the target")

    build = sub.add_parser("build-layered", help="build the layered BinRegDags refutation")
    with_instance(build)
    build.add_argument("-o", "--output")
    build.add_argument("--order", type=int, nargs="*")
    build.add_argument("--tree", action="store_true", help="build the variable-splitting LinTrees refutation instead")

    play = sub.add_parser("play", help="play Prover-Delayer games")
    with_instance(play)
    play.add_argument("--game", choices=[k.value for k in GameKind], default=GameKind.LINTREES.value)
    play.add_argument("--prover", default="random-legal", choices=["random-legal", "greedy-narrow"])
    play.add_argument("--seed", type=int)
    play.add_argument("--max-rounds", type=int, default=DEFAULT_MAX_ROUNDS)
    play.add_argument("--tau", type=int)
    play.add_argument("--tau0", type=int)
    play.add_argument("--s-max", type=int)
    play.add_argument("--games", type=int, default=1)
    play.add_argument("--csv")
    play.add_argument("-o", "--output")

    lemma = sub.add_parser("verify-lemma", help="seeded trials of a combinatorial lemma")
    lemma.add_argument("lemma", choices=list(TRIALS))
    lemma.add_argument("--trials", type=int, default=100)
    lemma.add_argument("--seed", type=int)
    lemma.add_argument("--timing", action="store_true")
    lemma.add_argument("-o", "--output")

    scan = sub.add_parser("robustness-scan", help="brute-force (s, r)-robustness profile")
    with_instance(scan)
    scan.add_argument("--s-max", type=int, required=True)
    scan.add_argument("--probe", action="store_true", help="report minimum 0-1 unsatisfiable subsystems instead")
    scan.add_argument("-o", "--output")

    witness = sub.add_parser("path-witness", help="path witness of a binregdag refutation")
    witness.add_argument("-P", "--proof", required=True)
    witness.add_argument("--point", type=int, nargs="+", required=True)
    witness.add_argument("--s", type=int, required=True)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    logging.basicConfig(level=args.log_level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    try:
        config = RunConfig.from_args(args)
        return COMMANDS[args.command](args, config)
    except LinresError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
