"""Molecules and contracted Gaussian basis sets.

Coordinates are stored in Bohr. Basis sets are ordered lists of contracted
shells; the atomic-orbital ordering is fixed by the shell order in the basis
file and, within a shell, by the component conventions documented below.

Component ordering
------------------
Cartesian components of a shell with angular momentum l are ordered
lexicographically in the exponent triple (ax, ay, az), descending in ax:
s; px, py, pz; xx, xy, xz, yy, yz, zz; and so on. Pure (spherical) shells
use the real solid harmonics ordered m = -l ... +l. Shells with l <= 1 are
identical in both conventions and always use the Cartesian (x, y, z) order.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

import numpy as np

ANGSTROM_TO_BOHR = 1.8897259886

_ELEMENTS = [
    "H", "He",
    "Li", "Be", "B", "C", "N", "O", "F", "Ne",
    "Na", "Mg", "Al", "Si", "P", "S", "Cl", "Ar",
]

ATOMIC_NUMBERS = {sym: i + 1 for i, sym in enumerate(_ELEMENTS)}

_SHELL_LETTERS = {"S": 0, "P": 1, "D": 2, "F": 3}
_L_LETTERS = {v: k for k, v in _SHELL_LETTERS.items()}

MAX_ANGULAR_MOMENTUM = 3


class ParseError(ValueError):
    """Malformed geometry or basis input."""


def cartesian_powers(l):
    """Exponent triples (ax, ay, az) of a Cartesian shell, fixed order."""
    return [
        (ax, ay, l - ax - ay)
        for ax in range(l, -1, -1)
        for ay in range(l - ax, -1, -1)
    ]


def n_cartesian(l):
    return (l + 1) * (l + 2) // 2


def _double_factorial(n):
    if n <= 0:
        return 1.0
    return float(math.prod(range(n, 0, -2)))


@dataclass
class Molecule:
    """Nuclear geometry: list of (symbol, Z, position/Bohr) plus charge."""

    atoms: list
    charge: int = 0
    multiplicity: int = 1

    def __post_init__(self):
        atoms = []
        for sym, z, pos in self.atoms:
            atoms.append((sym, int(z), np.asarray(pos, dtype=float)))
        self.atoms = atoms
        n_el = self.n_electrons
        if n_el < 0:
            raise ValueError(f"negative electron count ({n_el})")
        if n_el % 2 != 0:
            raise ValueError(
                f"odd electron count ({n_el}); only closed-shell systems are supported"
            )
        for i in range(len(self.atoms)):
            for j in range(i + 1, len(self.atoms)):
                if np.linalg.norm(self.atoms[i][2] - self.atoms[j][2]) < 1e-10:
                    raise ValueError(f"atoms {i} and {j} share a position")

    @property
    def n_electrons(self):
        return sum(z for _, z, _ in self.atoms) - self.charge

    def nuclear_repulsion(self):
        e = 0.0
        for i in range(len(self.atoms)):
            for j in range(i + 1, len(self.atoms)):
                zi, ri = self.atoms[i][1], self.atoms[i][2]
                zj, rj = self.atoms[j][1], self.atoms[j][2]
                e += zi * zj / np.linalg.norm(ri - rj)
        return e


def parse_xyz(text, unit="angstrom"):
    """Parse standard XYZ text (count line, comment line, `El x y z` lines)."""
    if unit not in ("angstrom", "bohr"):
        raise ValueError(f"unknown unit {unit!r}")
    scale = ANGSTROM_TO_BOHR if unit == "angstrom" else 1.0
    lines = text.splitlines()
    if not lines or not lines[0].strip():
        raise ParseError("line 1: expected atom count")
    try:
        count = int(lines[0].strip())
    except ValueError:
        raise ParseError(f"line 1: expected atom count, got {lines[0].strip()!r}") from None
    atoms = []
    lineno = 2
    for raw in lines[2:]:
        lineno += 1
        if not raw.strip():
            continue
        parts = raw.split()
        if len(parts) != 4:
            raise ParseError(f"line {lineno}: expected 'element x y z', got {raw.strip()!r}")
        sym = parts[0].capitalize()
        if sym not in ATOMIC_NUMBERS:
            raise ParseError(f"line {lineno}: unknown element {parts[0]!r}")
        try:
            pos = [float(x) for x in parts[1:]]
        except ValueError:
            raise ParseError(f"line {lineno}: malformed coordinate in {raw.strip()!r}") from None
        atoms.append((sym, ATOMIC_NUMBERS[sym], np.array(pos) * scale))
    if len(atoms) != count:
        raise ParseError(f"expected {count} atoms, found {len(atoms)}")
    return Molecule(atoms=atoms)


def serialize_xyz(molecule, unit="angstrom", comment=""):
    scale = 1.0 / ANGSTROM_TO_BOHR if unit == "angstrom" else 1.0
    lines = [str(len(molecule.atoms)), comment]
    for sym, _, pos in molecule.atoms:
        x, y, z = pos * scale
        lines.append(f"{sym} {x!r} {y!r} {z!r}")
    return "\n".join(lines) + "\n"


@dataclass
class Shell:
    """One contracted Gaussian shell on a center.

    Coefficients are stored engine-ready: primitive normalization and the
    contraction normalization of the (l, 0, 0) Cartesian component are folded
    in, so every Cartesian component has unit self-overlap once the engine
    applies the per-component factor from `component_norms`.
    """

    center: np.ndarray
    l: int
    exps: np.ndarray
    coefs: np.ndarray
    pure: bool = False

    def __post_init__(self):
        self.center = np.asarray(self.center, dtype=float)
        self.exps = np.asarray(self.exps, dtype=float)
        self.coefs = np.asarray(self.coefs, dtype=float)
        if self.l < 0 or self.l > MAX_ANGULAR_MOMENTUM:
            raise ValueError(f"unsupported angular momentum l={self.l}")
        if len(self.exps) != len(self.coefs) or len(self.exps) == 0:
            raise ValueError("exponent/coefficient lists must be equal and non-empty")
        if np.any(self.exps <= 0):
            raise ValueError("exponents must be strictly positive")

    @property
    def n_cart(self):
        return n_cartesian(self.l)

    @property
    def n_functions(self):
        if self.pure and self.l >= 2:
            return 2 * self.l + 1
        return self.n_cart

    def component_norms(self):
        """Per-Cartesian-component normalization relative to (l, 0, 0)."""
        dl = _double_factorial(2 * self.l - 1)
        return np.array([
            math.sqrt(dl / (_double_factorial(2 * ax - 1)
                            * _double_factorial(2 * ay - 1)
                            * _double_factorial(2 * az - 1)))
            for ax, ay, az in cartesian_powers(self.l)
        ])


def normalize_shell_coefficients(l, exps, coefs):
    """Fold primitive norms into contraction coefficients and normalize.

    Normalization targets the (l, 0, 0) Cartesian component; the remaining
    components are handled by Shell.component_norms.
    """
    exps = np.asarray(exps, dtype=float)
    coefs = np.asarray(coefs, dtype=float)
    prim_norm = (2 * exps / np.pi) ** 0.75 * (4 * exps) ** (l / 2.0) \
        / math.sqrt(_double_factorial(2 * l - 1))
    c = coefs * prim_norm
    p = exps[:, None] + exps[None, :]
    self_ovl = (np.pi / p) ** 1.5 * _double_factorial(2 * l - 1) / (2 * p) ** l
    s = c @ self_ovl @ c
    return c / math.sqrt(s)


def make_shell(center, l, exps, coefs, pure=False):
    """Build a Shell with normalized contraction coefficients."""
    return Shell(
        center=center,
        l=l,
        exps=np.asarray(exps, dtype=float),
        coefs=normalize_shell_coefficients(l, exps, coefs),
        pure=pure,
    )


@dataclass
class BasisSet:
    """Ordered list of shells; AO indices follow shell order."""

    shells: list
    name: str = ""

    @property
    def ao_count(self):
        return sum(sh.n_functions for sh in self.shells)

    @property
    def cart_count(self):
        return sum(sh.n_cart for sh in self.shells)

    def ao_offsets(self):
        offsets = []
        n = 0
        for sh in self.shells:
            offsets.append(n)
            n += sh.n_functions
        return offsets

    def max_l(self):
        return max((sh.l for sh in self.shells), default=0)


def parse_basis_blocks(text):
    """Split basis text into {element: [(l, exps, coefs), ...]} blocks."""
    blocks = {}
    current = None
    lineno = 0
    lines = text.splitlines()
    i = 0
    while i < len(lines):
        raw = lines[i]
        lineno = i + 1
        i += 1
        line = raw.split("!")[0].strip()
        if not line or line.startswith("****"):
            current = None
            continue
        parts = line.split()
        head = parts[0].capitalize()
        if current is None:
            if head not in ATOMIC_NUMBERS:
                raise ParseError(f"line {lineno}: unknown element {parts[0]!r} in basis header")
            current = head
            blocks.setdefault(current, [])
            continue
        letter = parts[0].upper()
        if letter not in _SHELL_LETTERS:
            raise ParseError(
                f"line {lineno}: expected shell 'L nprim' with L in S/P/D/F, got {raw.strip()!r}"
            )
        if len(parts) < 2:
            raise ParseError(f"line {lineno}: shell line needs a primitive count")
        try:
            nprim = int(parts[1])
        except ValueError:
            raise ParseError(f"line {lineno}: bad primitive count {parts[1]!r}") from None
        exps, coefs = [], []
        for k in range(nprim):
            if i >= len(lines):
                raise ParseError(f"line {lineno}: shell promises {nprim} primitives, text ends early")
            prim = lines[i].split("!")[0].strip().replace("D", "E").replace("d", "e")
            i += 1
            nums = re.split(r"[\s,]+", prim)
            if len(nums) != 2:
                raise ParseError(f"line {i}: expected 'exponent coefficient', got {lines[i-1].strip()!r}")
            try:
                e, c = float(nums[0]), float(nums[1])
            except ValueError:
                raise ParseError(f"line {i}: malformed number in {lines[i-1].strip()!r}") from None
            if e <= 0:
                raise ParseError(f"line {i}: non-positive exponent {e}")
            exps.append(e)
            coefs.append(c)
        blocks[current].append((_SHELL_LETTERS[letter], exps, coefs))
    return blocks


def parse_basis(text, molecule, pure=True, name=""):
    """Instantiate a basis on a molecule from element-block shell text.

    One Shell per (atom, shell-block) pair, atoms in molecule order. `pure`
    selects spherical (2l+1) functions for d and f shells.
    """
    blocks = parse_basis_blocks(text)
    shells = []
    for sym, _, pos in molecule.atoms:
        if sym not in blocks:
            raise ParseError(f"no basis for element {sym}")
        for l, exps, coefs in blocks[sym]:
            shells.append(make_shell(pos, l, exps, coefs, pure=pure))
    return BasisSet(shells=shells, name=name)


def union_basis(obs, aux):
    """Concatenate two basis sets (obs shells first, no deduplication)."""
    return BasisSet(shells=list(obs.shells) + list(aux.shells),
                    name=f"{obs.name}+{aux.name}" if obs.name or aux.name else "")


def even_tempered_exponents(alpha0, beta, n):
    """Geometric exponent ladder alpha0 * beta**k, k = 0 .. n-1."""
    if alpha0 <= 0 or beta <= 0:
        raise ValueError("even-tempered parameters must be positive")
    return [alpha0 * beta ** k for k in range(n)]


def make_even_tempered(molecule, specs, pure=True, name="even-tempered"):
    """Uncontracted even-tempered basis on every atom.

    specs: list of (l, alpha0, beta, n) ladders; one primitive shell per
    exponent per atom.
    """
    shells = []
    for _, _, pos in molecule.atoms:
        for l, alpha0, beta, n in specs:
            for e in even_tempered_exponents(alpha0, beta, n):
                shells.append(make_shell(pos, l, [e], [1.0], pure=pure))
    return BasisSet(shells=shells, name=name)


def serialize_basis(basis_blocks):
    """Render {element: [(l, exps, coefs), ...]} in the element-block format."""
    out = []
    for sym, shells in basis_blocks.items():
        out.append(sym)
        for l, exps, coefs in shells:
            out.append(f"{_L_LETTERS[l]}   {len(exps)}")
            for e, c in zip(exps, coefs):
                out.append(f"      {e: .10E}  {c: .10E}")
        out.append("****")
    return "\n".join(out) + "\n"
