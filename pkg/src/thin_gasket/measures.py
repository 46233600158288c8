"""Energy measures of harmonic functions and their singularity statistics.

The energy measure of a harmonic function h assigns to each depth-d cell
the energy h contributes there: E0(corner values) / R_d.  Aggregating over
children is exact by the one-subdivision trace identity, so these numbers
are consistent across depths.

Against the uniform measure, the per-cell Bhattacharyya coefficient of the
children of an admissible cell is bounded away from 1 by a fixed gap; the
certificate checks that bound cell by cell and the divergence statistic
accumulates 1 - coefficient along sampled addresses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DomainError
from .forms import HarmonicSpec, base_energy, cell_energies
from .geometry import CellMeasure, _letter_index, interior_letters
from .rand import stream
from .sequence import cell_count

#: sup over levels of the squared children-sum ceiling; attained at l = 5.
CEILING_SUP_SQ = Fraction(361, 372)

#: Uniform gap 1 - sqrt(361/372) between the ceiling and 1.
SINGULARITY_GAP = 1.0 - math.sqrt(361.0 / 372.0)

#: Relative floor below which a cell mass counts as zero.  Double-precision
#: cascades carry absolute noise around 1e-31 per cell energy, amplified by
#: 1/R_d; genuine admissible masses sit many orders above 1e-20 * total,
#: exact zeros (degenerate pins) far below.  Cells under the floor are
#: reported as zero-mass: the divergence statistic assigns them the limit
#: term 1, the certificate counts them separately instead of verifying
#: unverifiable noise.  Rational-precision routes have exact zeros and
#: never hit the floor.
MASS_FLOOR_REL = 1e-20


def children_sum_ceiling(l: int) -> float:
    """Upper bound (4l-1)/sqrt((3l-3)(6l+1)) for the children coefficient
    of an admissible level-l subdivision."""
    return (4 * l - 1) / math.sqrt((3 * l - 3) * (6 * l + 1))


def ceiling_below_sup(l: int) -> bool:
    """Exact integer check that children_sum_ceiling(l)^2 <= 361/372."""
    lhs = (4 * l - 1) ** 2 * CEILING_SUP_SQ.denominator
    rhs = CEILING_SUP_SQ.numerator * (3 * l - 3) * (6 * l + 1)
    return lhs <= rhs


# ---- Energy measures -----------------------------------------------------


def energy_measure(h: HarmonicSpec, depth: int, route: str = "matrices") -> CellMeasure:
    """Energy measure of h on depth-`depth` cells.

    route "matrices" uses per-cell matrix products, "graph" reads corner
    values off a pinned Laplacian solve.  Masses are exact Fractions when
    h carries rational precision.
    """
    ls = h.ls
    d_eff = max(depth, h.pin_level)
    if route == "matrices":
        vals = h.cell_values(d_eff)
    elif route == "graph":
        vals = h.cell_values_from_graph(d_eff)
    else:
        raise DomainError(f"unknown route {route!r}")
    r = ls.R(d_eff)
    if h.precision == "rational":
        fine = [base_energy(row) / r for row in vals]
        if d_eff == depth:
            masses = fine
        else:
            block = ls.M(d_eff) // ls.M(depth)
            masses = [sum(fine[i * block:(i + 1) * block], Fraction(0))
                      for i in range(ls.M(depth))]
        return CellMeasure(ls, depth, masses, kind="energy")
    fine = cell_energies(np.asarray(vals)) / float(r)
    if d_eff != depth:
        fine = fine.reshape(ls.M(depth), -1).sum(axis=1)
    return CellMeasure(ls, depth, fine, kind="energy")


def _coefficient(children, parent, m: int) -> float:
    """Bhattacharyya coefficient of the children profile against uniform."""
    if parent <= 0:
        return 0.0
    s = 0.0
    for c in children:
        if c > 0:
            s += math.sqrt(float(c) / float(parent))
    return s / math.sqrt(m)


def bhattacharyya_children(mu: CellMeasure, parent_index: int) -> float:
    """Children coefficient of the cell with the given depth-(d-1) index,
    where mu lives at depth d."""
    if mu.depth < 1:
        raise DomainError("children coefficients need depth >= 1")
    m = cell_count(mu.ls.level(mu.depth))
    lo = parent_index * m
    children = [mu.mass_by_index(i) for i in range(lo, lo + m)]
    parent = sum(float(c) for c in children)
    return _coefficient(children, parent, m)


# ---- Singularity certificate --------------------------------------------


@dataclass
class DepthRecord:
    depth: int          # parent depth
    level: int          # child subdivision level
    n_admissible: int
    n_zero_mass: int
    max_coeff: float
    ceiling: float

    @property
    def ok(self) -> bool:
        return self.n_admissible == 0 or self.max_coeff <= self.ceiling + 1e-12


@dataclass
class CertificateReport:
    pin_level: int
    max_depth: int
    gap: float
    records: list
    n_admissible: int
    max_excess: float
    passed: bool


def _mass_arrays(h: HarmonicSpec, depths, route: str = "matrices"):
    """Float per-cell energy masses for each requested depth."""
    ls = h.ls
    out = {}
    for d in depths:
        vals = h.cell_values(d) if route == "matrices" else h.cell_values_from_graph(d)
        if h.precision == "rational":
            arr = np.array([float(base_energy(row)) for row in vals])
            out[d] = arr / float(ls.R(d))
        else:
            out[d] = cell_energies(np.asarray(vals)) / float(ls.R(d))
    return out


def singularity_certificate(h: HarmonicSpec, max_depth: int, tol: float = 1e-12,
                            route: str = "matrices") -> CertificateReport:
    """Check the children-coefficient ceiling over every admissible cell.

    Admissible parents sit at depths pin_level+1 .. max_depth-1, end in an
    interior letter of their own level, and carry positive energy mass.
    """
    ls = h.ls
    k = h.pin_level
    if max_depth < k + 2:
        raise DomainError("certificate needs max_depth >= pin_level + 2")
    masses = _mass_arrays(h, range(k + 1, max_depth + 1), route)
    total = float(masses[k + 1].sum())
    floor = MASS_FLOOR_REL * total if total > 0 else 0.0

    records = []
    n_adm = 0
    max_excess = -math.inf
    for d in range(k + 1, max_depth):
        l_parent = ls.level(d)
        l_child = ls.level(d + 1)
        m_parent = cell_count(l_parent)
        m_child = cell_count(l_child)
        parent = masses[d]
        child = masses[d + 1].reshape(parent.size, m_child)

        last = np.arange(parent.size) % m_parent
        interior = np.zeros(m_parent, dtype=bool)
        for letter in interior_letters(l_parent):
            interior[_letter_pos(l_parent, letter)] = True
        mask = interior[last] & (parent > floor)

        n_mask = int(mask.sum())
        n_zero = int((interior[last] & ~(parent > floor)).sum())
        if n_mask:
            p = parent[mask]
            c = child[mask]
            coeff = np.sqrt(np.maximum(c, 0.0) / p[:, None]).sum(axis=1) / math.sqrt(m_child)
            mx = float(coeff.max())
        else:
            mx = 0.0
        ceiling = children_sum_ceiling(l_child)
        records.append(DepthRecord(d, l_child, n_mask, n_zero, mx, ceiling))
        n_adm += n_mask
        if n_mask:
            max_excess = max(max_excess, mx - ceiling)
    passed = all(r.ok for r in records) and all(
        r.max_coeff <= math.sqrt(float(CEILING_SUP_SQ)) + tol for r in records if r.n_admissible)
    return CertificateReport(k, max_depth, SINGULARITY_GAP, records, n_adm,
                             max_excess if n_adm else 0.0, passed)


def _letter_pos(l: int, letter) -> int:
    return _letter_index(l)[tuple(letter)]


# ---- Divergence along sampled addresses ----------------------------------


@dataclass(frozen=True)
class AddressSample:
    letters: tuple
    divergence_sum: float
    ap_count: int
    bound: float
    ok: bool


@dataclass
class DivergenceReport:
    n_samples: int
    max_depth: int
    delta: float
    samples: list
    n_failures: int
    passed: bool


def divergence_statistic(h: HarmonicSpec, max_depth: int, n_samples: int = 200,
                         seed: int = 0, route: str = "matrices",
                         tol: float = 1e-9) -> DivergenceReport:
    """Accumulate 1 - coefficient along uniformly sampled addresses.

    Along each address the partial sum over depths k+1..N must dominate
    delta times the number of interior-letter steps in k+2..N; cells of
    zero mass contribute a full unit.
    """
    ls = h.ls
    k = h.pin_level
    if max_depth < k + 2:
        raise DomainError("divergence needs max_depth >= pin_level + 2")
    masses = _mass_arrays(h, range(k, max_depth + 1), route)
    total = float(masses[k].sum())
    floor = MASS_FLOOR_REL * total if total > 0 else 0.0

    counts = [cell_count(ls.level(d)) for d in range(1, max_depth + 1)]
    interior_sets = {}
    for d in range(1, max_depth + 1):
        l = ls.level(d)
        if l not in interior_sets:
            pos = [_letter_pos(l, w) for w in interior_letters(l)]
            flags = np.zeros(cell_count(l), dtype=bool)
            flags[pos] = True
            interior_sets[l] = flags

    rng = stream(seed, 0)
    letters = np.stack([rng.integers(0, counts[d - 1], size=n_samples)
                        for d in range(1, max_depth + 1)], axis=1)

    delta = SINGULARITY_GAP
    samples = []
    failures = 0
    for s in range(n_samples):
        idx = 0
        div = 0.0
        ap = 0
        for n in range(1, max_depth + 1):
            letter = int(letters[s, n - 1])
            child_idx = idx * counts[n - 1] + letter
            if n >= k + 1:
                parent_mass = float(masses[n - 1][idx])
                if parent_mass <= floor:
                    div += 1.0
                else:
                    m = counts[n - 1]
                    block = masses[n][idx * m:(idx + 1) * m]
                    coeff = float(np.sqrt(np.maximum(block, 0.0) / parent_mass).sum()
                                  / math.sqrt(m))
                    div += 1.0 - coeff
            if n >= k + 2 and interior_sets[ls.level(n - 1)][int(letters[s, n - 2])]:
                ap += 1
            idx = child_idx
        bound = delta * ap
        ok = div >= bound - tol
        if not ok:
            failures += 1
        samples.append(AddressSample(tuple(int(x) for x in letters[s]), div, ap, bound, ok))
    return DivergenceReport(n_samples, max_depth, delta, samples, failures, failures == 0)
