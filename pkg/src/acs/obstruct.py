"""Integer checks for the existence of almost complex structures with
non-degenerate (or partially non-degenerate) Nijenhuis tensor.

Class-level facts (torsion statements) are taken from the caller as booleans;
no cohomology ring is modelled.
"""

from __future__ import annotations

from dataclasses import dataclass, field

ADMITS = "ADMITS"
EXCLUDED = "EXCLUDED"
UNDETERMINED = "UNDETERMINED"


@dataclass(frozen=True)
class Check:
    name: str
    expression: str
    status: str  # "pass" | "fail" | "undetermined"

    def to_json(self) -> dict:
        return {"name": self.name, "expression": self.expression, "status": self.status}


@dataclass
class ObstructionReport:
    context: str
    checks: list
    info: dict = field(default_factory=dict)
    note: str = ""

    @property
    def verdict(self) -> str:
        st = [c.status for c in self.checks]
        if "fail" in st:
            return EXCLUDED
        if "undetermined" in st:
            return UNDETERMINED
        return ADMITS

    @property
    def admits(self) -> bool:
        return self.verdict == ADMITS

    def to_json(self) -> dict:
        return {
            "context": self.context,
            "verdict": self.verdict,
            "checks": [c.to_json() for c in self.checks],
            "info": self.info,
            "note": self.note,
        }

    def text(self) -> str:
        lines = [f"{self.context}: {self.verdict}"]
        for c in self.checks:
            lines.append(f"  [{c.status}] {c.name}: {c.expression}")
        for k, v in self.info.items():
            lines.append(f"  {k} = {v}")
        if self.note:
            lines.append(f"  note: {self.note}")
        return "\n".join(lines)


def _chk(name: str, expr: str, ok: bool | None) -> Check:
    return Check(name, expr, "undetermined" if ok is None else ("pass" if ok else "fail"))


def dim4_check(chi: int, tau: int) -> ObstructionReport:
    a = 5 * chi + 6 * tau
    checks = [
        _chk("5χ+6τ=0", f"5·{chi}+6·{tau} = {a}", a == 0),
        _chk("χ≡0 mod 24", f"{chi} mod 24 = {chi % 24}", chi % 24 == 0),
    ]
    from fractions import Fraction

    kk = Fraction(-chi, 2)
    info = {"K·K (=-χ/2)": str(kk), "c1^2 (Wu: 2χ+3τ)": 2 * chi + 3 * tau}
    return ObstructionReport("dim4", checks, info)


def cp2sum_check(r: int, s: int) -> ObstructionReport:
    if r < 0 or s < 0:
        raise ValueError("r and s must be non-negative")
    checks = [
        _chk("r odd", f"r = {r}", r % 2 == 1),
        _chk("s = 11r+10", f"{s} vs {11 * r + 10}", s == 11 * r + 10),
    ]
    return ObstructionReport(f"#{r}CP2 # {s}(-CP2)", checks, {"chi": 2 + r + s, "tau": r - s})


def typeii_check(m: int, n: int) -> ObstructionReport:
    checks = [
        _chk("4n = 5(m+1)", f"{4 * n} vs {5 * (m + 1)}", 4 * n == 5 * (m + 1)),
        _chk("n > 0", f"n = {n}", n > 0),
        _chk("m ≡ 3 mod 4", f"{m} mod 4 = {m % 4}", m % 4 == 3),
    ]
    return ObstructionReport(f"mH+nE8 (m={m}, n={n})", checks)


def dim6_check(c1_torsion3: bool, c1_squared_zero: bool, c1c2: int) -> ObstructionReport:
    checks = [
        _chk("3c1=0", str(bool(c1_torsion3)), bool(c1_torsion3)),
        _chk("c1^2=0", str(bool(c1_squared_zero)), bool(c1_squared_zero)),
        _chk("c1c2=0", f"c1c2 = {c1c2}", c1c2 == 0),
    ]
    return ObstructionReport("dim6", checks)


def cp3_check(r: int) -> ObstructionReport:
    """Structures on CP^3 with total Chern class 1 + 2r x + 2(r^2-1) x^2 + 4 x^3."""
    c1 = 2 * r
    c1c2 = 4 * r * (r * r - 1)
    rep = dim6_check(3 * c1 == 0, c1 * c1 == 0, c1c2)
    rep.context = f"CP3 (r={r})"
    rep.info = {"c1": f"{c1}x", "c1^2": f"{c1 * c1}x^2", "c1c2": c1c2}
    if rep.admits:
        rep.note = "UNDETERMINED-ADMITS: no implemented obstruction fails, existence is open"
    return rep


MODES = ("general", "transversal", "strong")


def dim8_check(
    c1_4: int,
    c1_2c2: int,
    c1c3: int,
    c2_2: int,
    c4: int,
    mode: str = "general",
    torsion_free: bool = True,
    q4: int | None = None,
) -> ObstructionReport:
    """Chern numbers c1^4, c1^2 c2, c1 c3, c2^2, c4 of an 8-manifold.

    ``q4`` is the number <q^4, [M]> for the class q of the transversal case.
    """
    mode = mode.lower()
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    a = -c1_4 + 4 * c1_2c2 + c1c3 + 3 * c2_2 - c4
    b = 2 * c1_4 + c1_2c2
    c = c1c3 - 2 * c4
    checks = [
        _chk("-c1^4+4c1^2c2+c1c3+3c2^2-c4 ≡ 0 mod 720", f"{a} mod 720 = {a % 720}", a % 720 == 0),
        _chk("2c1^4+c1^2c2 ≡ 0 mod 12", f"{b} mod 12 = {b % 12}", b % 12 == 0),
        _chk("c1c3-2c4 ≡ 0 mod 4", f"{c} mod 4 = {c % 4}", c % 4 == 0),
    ]
    if mode == "transversal":
        checks.append(_chk("χ = c4 = 0", f"c4 = {c4}", c4 == 0))
        checks.append(_chk("c1-numbers vanish (3c1=0)", f"c1^4={c1_4}, c1^2c2={c1_2c2}, c1c3={c1c3}", c1_4 == c1_2c2 == c1c3 == 0))
        if q4 is None:
            checks.append(_chk("c2^2 = q^4 (3c2=-3q^2)", "q not supplied", None))
        else:
            checks.append(_chk("c2^2 = q^4 (3c2=-3q^2)", f"{c2_2} vs {q4}", c2_2 == q4))
    elif mode == "strong":
        checks.append(_chk("c4 ≡ 0 mod 720", f"{c4} mod 720 = {c4 % 720}", c4 % 720 == 0))
        nums = (c1_4, c1_2c2, c1c3, c2_2, c4)
        if torsion_free:
            checks.append(_chk("torsion-free: all Chern numbers vanish", str(nums), all(x == 0 for x in nums)))
        else:
            checks.append(_chk("torsion-free: all Chern numbers vanish", "cohomology has torsion", None))
    return ObstructionReport(f"dim8 ({mode})", checks, {"chi": c4})
