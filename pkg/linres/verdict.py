""" accept / reject results returned by the proof checkers """

from dataclasses import dataclass


@dataclass(frozen=True)
class Verdict:
    accepted: bool
    diagnostic: str | None = None
    location: str | None = None

    def __bool__(self):
        return self.accepted

    @classmethod
    def accept(cls):
        return cls(True)

    @classmethod
    def reject(cls, location, diagnostic):
        return cls(False, diagnostic, location)

    def __str__(self):
        if self.accepted:
            return "accept"
        return f"reject {self.location}: {self.diagnostic}"
