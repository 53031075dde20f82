"""Orbifold sector bookkeeping for global quotients."""

import logging
import re
from dataclasses import replace
from itertools import permutations
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from sympy.polys.domains import QQ, QQ_I
from sympy.polys.matrices import DomainMatrix

from qcring.core.errors import (
    ExponentOutOfRange,
    InvalidGroupTable,
    InvalidPartition,
    NonIntegerIota,
    NonIntegerSignExponent,
    NotAnInvolution,
    NotHermitian,
    SectorMismatch,
)
from qcring.core.scalars import ONE, GaussRational, Rational, conjugate, format_rational, i_pow
from qcring.models.algebra import BasisElement, GradedAlgebra, PairingMatrix, Vector
from qcring.models.maps import DiagonalMap
from qcring.models.sector import ConjugacyClass, GroupSpec, HermitianMatrix, SectorAlgebra, SectorKey, SectorLabel

logger = logging.getLogger(__name__)

_STANDARD_RE = re.compile(r"(?P<family>[ZS])(?P<n>\d+)")


def make_group(names: Sequence[str], table: Sequence[Sequence[int]]) -> GroupSpec:
    """Validate a multiplication table and wrap it in a GroupSpec."""
    n = len(names)
    if n == 0:
        raise InvalidGroupTable("group must have at least one element")
    if len(set(names)) != n:
        raise InvalidGroupTable("group element names must be unique")
    if len(table) != n or any(len(row) != n for row in table):
        raise InvalidGroupTable(f"table must be {n}x{n}")
    for row in table:
        for entry in row:
            if not isinstance(entry, int) or not 0 <= entry < n:
                raise InvalidGroupTable(f"table entry {entry!r} is not an element index")

    identity = next(
        (e for e in range(n) if all(table[e][a] == a and table[a][e] == a for a in range(n))),
        None,
    )
    if identity is None:
        raise InvalidGroupTable("table has no identity element")
    for a in range(n):
        if not any(table[a][b] == identity and table[b][a] == identity for b in range(n)):
            raise InvalidGroupTable(f"{names[a]} has no inverse")
    for a in range(n):
        for b in range(n):
            ab = table[a][b]
            for c in range(n):
                if table[ab][c] != table[a][table[b][c]]:
                    raise InvalidGroupTable(f"table is not associative at ({names[a]}, {names[b]}, {names[c]})")

    return GroupSpec(tuple(names), tuple(tuple(row) for row in table), identity)


def standard_group(name: str) -> GroupSpec:
    """Cyclic groups ``Z<n>`` and symmetric groups ``S<n>`` by name."""
    match = _STANDARD_RE.fullmatch(name.strip())
    if not match or int(match["n"]) < 1:
        raise InvalidGroupTable(f"unknown standard group {name!r}")
    n = int(match["n"])
    if match["family"] == "Z":
        names = ["e"] + [f"g{k}" if k > 1 else "g" for k in range(1, n)]
        table = [[(a + b) % n for b in range(n)] for a in range(n)]
        return make_group(names, table)

    perms = list(permutations(range(n)))
    position = {perm: index for index, perm in enumerate(perms)}
    names = ["e"] + ["p" + "".join(str(x) for x in perm) for perm in perms[1:]]
    table = [[position[tuple(a[b[x]] for x in range(n))] for b in perms] for a in perms]
    return make_group(names, table)


def conjugacy_classes(group: GroupSpec) -> List[ConjugacyClass]:
    classes: List[ConjugacyClass] = []
    seen = set()
    for a in range(group.order):
        if a in seen:
            continue
        members = sorted({group.conjugate(a, b) for b in range(group.order)})
        seen.update(members)
        centralizer = sum(1 for b in range(group.order) if group.multiply(a, b) == group.multiply(b, a))
        classes.append(ConjugacyClass(members[0], tuple(members), centralizer))
    logger.debug("group of order %d has %d conjugacy classes", group.order, len(classes))
    return classes


def class_map(group: GroupSpec) -> Dict[int, int]:
    """Element index -> representative of its conjugacy class."""
    return {member: cls.representative for cls in conjugacy_classes(group) for member in cls.members}


def inverse_class(group: GroupSpec, representative: int) -> int:
    return class_map(group)[group.inverse(representative)]


def age(exponents: Sequence[Rational]) -> Rational:
    total = QQ(0)
    for exponent in exponents:
        exponent = QQ.convert(exponent)
        if exponent < 0 or exponent >= 1:
            raise ExponentOutOfRange(f"exponent {format_rational(exponent)} is outside [0, 1)")
        total += exponent
    return total


def perm_degree_shift(cycle_type: Sequence[int], fiber_dim: int, n: Optional[int] = None) -> Rational:
    """(d/2) * sum(k_i - 1) for a permutation of the given cycle type acting on (C^d)^n."""
    if fiber_dim < 1:
        raise InvalidPartition(f"fiber dimension must be positive, got {fiber_dim}")
    if not cycle_type or any(not isinstance(k, int) or k < 1 for k in cycle_type):
        raise InvalidPartition(f"{list(cycle_type)} is not a partition")
    if n is not None and sum(cycle_type) != n:
        raise InvalidPartition(f"{list(cycle_type)} is not a partition of {n}")
    return QQ(fiber_dim, 2) * sum(k - 1 for k in cycle_type)


def epsilon_sign(iota1: Rational, iota2: Rational, iota12: Rational) -> Rational:
    return QQ(1, 2) * (QQ.convert(iota1) + QQ.convert(iota2) - QQ.convert(iota12))


def iota_table(group: GroupSpec, assignments: Mapping[int, Rational]) -> Dict[int, Rational]:
    """Degree-shifting numbers per class representative.

    Assignments may name any member of a class; members of one class must
    agree. The identity class defaults to 0.
    """
    classes = class_map(group)
    table: Dict[int, Rational] = {}
    for element, value in assignments.items():
        value = QQ.convert(value)
        if value < 0:
            raise ExponentOutOfRange(f"iota({group.names[element]}) = {format_rational(value)} is negative")
        representative = classes[element]
        if representative in table and table[representative] != value:
            raise SectorMismatch(f"conflicting iota values on the class of {group.names[element]}")
        table[representative] = value

    identity = classes[group.identity]
    if table.setdefault(identity, QQ(0)) != 0:
        raise SectorMismatch("iota of the identity class must be 0")
    for representative in sorted(set(classes.values())):
        if representative not in table:
            raise SectorMismatch(f"no degree-shifting number for the class of {group.names[representative]}")
    return dict(sorted(table.items()))


def epsilon_table(group: GroupSpec, iota: Mapping[int, Rational]) -> Dict[Tuple[int, int], Rational]:
    """epsilon(h1, h2) for every ordered pair of group elements."""
    classes = class_map(group)
    return {
        (a, b): epsilon_sign(iota[classes[a]], iota[classes[b]], iota[classes[group.multiply(a, b)]])
        for a in range(group.order)
        for b in range(group.order)
    }


def sector_labels(algebra: GradedAlgebra, group: GroupSpec, iota: Mapping[int, Rational]) -> Tuple[SectorLabel, ...]:
    classes = class_map(group)
    labels = []
    for element in algebra.basis:
        labels.append(_label(element, group, classes, iota))
    return tuple(labels)


def _label(element: BasisElement, group: GroupSpec, classes: Mapping[int, int], iota: Mapping[int, Rational]) -> SectorLabel:
    if element.sector is None:
        representative = classes[group.identity]
    else:
        if element.sector not in group.names:
            raise SectorMismatch(f"{element.name} lives in unknown sector {element.sector!r}")
        representative = classes[group.index(element.sector)]
    return SectorLabel(representative, iota[representative])


def sector_algebra(algebra: GradedAlgebra, group: GroupSpec, iota: Mapping[int, Rational]) -> SectorAlgebra:
    """Split structure constants into components keyed by (class h1, class h2, class h1h2)."""
    classes = class_map(group)
    labels = sector_labels(algebra, group, iota)
    reachable = {
        (classes[a], classes[b], classes[group.multiply(a, b)])
        for a in range(group.order)
        for b in range(group.order)
    }

    components: Dict[SectorKey, Dict[Tuple[int, int], List[GaussRational]]] = {}
    for (i, j), vector in sorted(algebra.products.items()):
        for k, value in enumerate(vector):
            if not value:
                continue
            key = SectorKey(labels[i].class_id, labels[j].class_id, labels[k].class_id)
            if (key.left, key.right, key.target) not in reachable:
                raise SectorMismatch(
                    f"{algebra.basis[i].name} * {algebra.basis[j].name} has a component on "
                    f"{algebra.basis[k].name}, outside the class of h1 h2"
                )
            part = components.setdefault(key, {}).setdefault((i, j), list(algebra.zero_vector()))
            part[k] = value

    frozen = {
        key: {pair: tuple(vector) for pair, vector in sorted(parts.items())}
        for key, parts in sorted(components.items())
    }
    logger.debug("split product into %d sector components", len(frozen))
    return SectorAlgebra(algebra, group, labels, dict(iota), frozen)


def signed_product(sa: SectorAlgebra) -> SectorAlgebra:
    """Scale each (h1, h2) component by (-1)^epsilon(h1, h2)."""
    signed: Dict[SectorKey, Dict[Tuple[int, int], Vector]] = {}
    for key, parts in sa.components.items():
        epsilon = epsilon_sign(sa.iota[key.left], sa.iota[key.right], sa.iota[key.target])
        if epsilon.denominator != 1:
            raise NonIntegerSignExponent(
                f"epsilon = {format_rational(epsilon)} for classes "
                f"({sa.group.names[key.left]}, {sa.group.names[key.right]})"
            )
        sign = -ONE if int(epsilon.numerator) % 2 else ONE
        signed[key] = {pair: tuple(sign * value for value in vector) for pair, vector in parts.items()}

    twisted = replace(sa, components=signed)
    return replace(twisted, algebra=twisted.total())


def qinwang_map(sa: SectorAlgebra) -> DiagonalMap:
    """alpha -> i^iota(g) alpha on every class of sector (g).

    Intertwines the signed product (source) with the original one (target).
    """
    scalars = []
    for element, label in zip(sa.algebra.basis, sa.labels):
        if label.iota.denominator != 1:
            raise NonIntegerIota(f"iota = {format_rational(label.iota)} on {element.name}")
        scalars.append(i_pow(int(label.iota.numerator)))
    return DiagonalMap(tuple(scalars))


def validate_involution(involution: Sequence[int]) -> None:
    n = len(involution)
    if sorted(involution) != list(range(n)):
        raise NotAnInvolution("involution is not a permutation of the basis")
    for a in range(n):
        if involution[involution[a]] != a:
            raise NotAnInvolution(f"involution does not square to the identity at index {a}")


def hermitian_gram(
    pairing: PairingMatrix,
    involution: Sequence[int],
    basis: Optional[Sequence[BasisElement]] = None,
    group: Optional[GroupSpec] = None,
) -> HermitianMatrix:
    """G[a][b] = <a, I(b)>; basis elements are real so conjugation only touches coefficients."""
    validate_involution(involution)
    if len(involution) != pairing.size:
        raise NotAnInvolution("involution and pairing have different sizes")
    if basis is not None:
        classes = class_map(group) if group is not None else None
        for a, b in enumerate(involution):
            if basis[a].degree != basis[b].degree:
                raise SectorMismatch(f"involution sends {basis[a].name} to {basis[b].name} of another degree")
            if classes is not None and _sector_class(basis[b], group, classes) != _inverse_sector_class(basis[a], group, classes):
                raise SectorMismatch(f"involution must send the sector of {basis[a].name} to its inverse sector")

    n = pairing.size
    rows = tuple(tuple(pairing.entry(a, involution[b]) for b in range(n)) for a in range(n))
    gram = HermitianMatrix(rows)
    if not is_hermitian(gram):
        raise NotHermitian("<a, I(b)> is not hermitian for this pairing and involution")
    return gram


def _sector_class(element: BasisElement, group: GroupSpec, classes: Mapping[int, int]) -> int:
    if element.sector is None:
        return classes[group.identity]
    if element.sector not in group.names:
        raise SectorMismatch(f"{element.name} lives in unknown sector {element.sector!r}")
    return classes[group.index(element.sector)]


def _inverse_sector_class(element: BasisElement, group: GroupSpec, classes: Mapping[int, int]) -> int:
    return classes[group.inverse(_sector_class(element, group, classes))]


def is_hermitian(matrix: HermitianMatrix) -> bool:
    n = matrix.size
    if any(len(row) != n for row in matrix.rows):
        return False
    return all(matrix.entry(a, b) == conjugate(matrix.entry(b, a)) for a in range(n) for b in range(a, n))


def is_positive_definite(matrix: HermitianMatrix) -> bool:
    """Leading principal minors; each is real for a hermitian matrix."""
    if not is_hermitian(matrix):
        raise NotHermitian("matrix is not equal to its conjugate transpose")
    for size in range(1, matrix.size + 1):
        minor = DomainMatrix([list(row[:size]) for row in matrix.rows[:size]], (size, size), QQ_I).det()
        if minor.y or minor.x <= 0:
            logger.debug("leading minor of size %d is not positive", size)
            return False
    return True
