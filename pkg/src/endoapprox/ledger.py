"""Named positive rational constants with provenance.

Every implicit multiplicative constant in the library is a concrete
rational recorded here, together with the formula it came from and the
inputs that produced it, so reports can show exactly which bound was
checked and why it is valid.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction


class LedgerError(KeyError):
    pass


@dataclass(frozen=True)
class LedgerEntry:
    name: str
    value: Fraction
    formula: str
    inputs: tuple[tuple[str, str], ...] = ()

    def __post_init__(self):
        if self.value <= 0:
            raise ValueError(f"ledger constant {self.name} must be positive, got {self.value}")


# the approximation chain names this type after what it stores
LedgerBound = LedgerEntry


@dataclass
class ConstantLedger:
    entries: dict[str, LedgerEntry] = field(default_factory=dict)

    def define(self, name: str, value: Fraction, formula: str, **inputs) -> LedgerEntry:
        entry = LedgerEntry(
            name=name,
            value=Fraction(value),
            formula=formula,
            inputs=tuple(sorted((k, str(v)) for k, v in inputs.items())),
        )
        self.entries[name] = entry
        return entry

    def value(self, name: str) -> Fraction:
        try:
            return self.entries[name].value
        except KeyError:
            raise LedgerError(f"no ledger constant named {name!r}") from None

    def __contains__(self, name: str) -> bool:
        return name in self.entries

    def to_jsonable(self) -> dict:
        return {
            name: {
                "value": {"num": str(e.value.numerator), "den": str(e.value.denominator)},
                "formula": e.formula,
                "inputs": {k: v for k, v in e.inputs},
            }
            for name, e in sorted(self.entries.items())
        }
