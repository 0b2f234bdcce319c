"""Integer interval algebra for frequency slot units.

Spectrum on a link is modeled as integer unit indices ``0 .. omega - 1``.
A contiguous block of units (CU) is stored as an inclusive ``(lo, hi)``
pair.  A set of available units is a UnitSet: a tuple of CUs that is
sorted, pairwise disjoint and non-adjacent, so every member CU is
maximal.  All operations are pure and return new values.
"""

from __future__ import annotations

from collections.abc import Iterable

CU = tuple[int, int]
UnitSet = tuple[CU, ...]

EMPTY: UnitSet = ()


class SpectrumError(ValueError):
    """Raised for invalid allocations, releases or malformed intervals."""


def cu_width(c: CU) -> int:
    return c[1] - c[0] + 1


def cu_includes(a: CU, b: CU) -> bool:
    """True iff every unit of ``b`` is also in ``a``."""
    return a[0] <= b[0] and b[1] <= a[1]


def cu_incomparable(a: CU, b: CU) -> bool:
    """True iff neither CU includes the other."""
    return not cu_includes(a, b) and not cu_includes(b, a)


def universe(omega: int) -> UnitSet:
    """The full unit set ``0 .. omega - 1``; empty when omega is 0."""
    if omega < 0:
        raise SpectrumError(f"negative universe size {omega}")
    return ((0, omega - 1),) if omega else EMPTY


def validate(s: UnitSet) -> None:
    """Raise SpectrumError unless ``s`` is canonical."""
    prev_hi = None
    for c in s:
        if len(c) != 2 or c[0] > c[1] or c[0] < 0:
            raise SpectrumError(f"malformed CU {c!r}")
        # members must be sorted and separated by at least one missing unit
        if prev_hi is not None and c[0] <= prev_hi + 1:
            raise SpectrumError(f"CU {c!r} overlaps or touches its neighbor")
        prev_hi = c[1]


def is_canonical(s: UnitSet) -> bool:
    try:
        validate(s)
    except SpectrumError:
        return False
    return True


def from_units(units: Iterable[int]) -> UnitSet:
    """Build the canonical UnitSet holding exactly the given units."""
    seen = sorted(set(units))
    if not seen:
        return EMPTY
    if seen[0] < 0:
        raise SpectrumError(f"negative unit {seen[0]}")
    out = []
    lo = hi = seen[0]
    for u in seen[1:]:
        if u == hi + 1:
            hi = u
        else:
            out.append((lo, hi))
            lo = hi = u
    out.append((lo, hi))
    return tuple(out)


def iter_units(s: UnitSet):
    for lo, hi in s:
        yield from range(lo, hi + 1)


def unit_count(s: UnitSet) -> int:
    return sum(hi - lo + 1 for lo, hi in s)


def contains_cu(s: UnitSet, c: CU) -> bool:
    """True iff all units of ``c`` are present in ``s``.

    A contiguous block can never straddle the gap between two members,
    so membership means some single member includes it.
    """
    lo, hi = c
    for alo, ahi in s:
        if alo > lo:
            return False
        if ahi >= hi:
            return True
    return False


def intersect(a: UnitSet, b: UnitSet) -> UnitSet:
    """Units present in both sets, as a canonical UnitSet."""
    out = []
    i = j = 0
    na, nb = len(a), len(b)
    while i < na and j < nb:
        lo = a[i][0] if a[i][0] > b[j][0] else b[j][0]
        hi = a[i][1] if a[i][1] < b[j][1] else b[j][1]
        if lo <= hi:
            out.append((lo, hi))
        if a[i][1] < b[j][1]:
            i += 1
        else:
            j += 1
    return tuple(out)


def intersect_cu(c: CU, s: UnitSet) -> UnitSet:
    """Intersection of a single CU with a UnitSet (fast path)."""
    lo, hi = c
    out = []
    for alo, ahi in s:
        if ahi < lo:
            continue
        if alo > hi:
            break
        out.append((alo if alo > lo else lo, ahi if ahi < hi else hi))
    return tuple(out)


def allocate(s: UnitSet, c: CU) -> UnitSet:
    """Remove the units of ``c`` from ``s``.

    All of ``c`` must be available, otherwise SpectrumError is raised.
    """
    lo, hi = c
    if lo > hi:
        raise SpectrumError(f"malformed CU {c!r}")
    for i, (alo, ahi) in enumerate(s):
        if alo <= lo and hi <= ahi:
            pieces = []
            if alo < lo:
                pieces.append((alo, lo - 1))
            if hi < ahi:
                pieces.append((hi + 1, ahi))
            return s[:i] + tuple(pieces) + s[i + 1:]
        if alo > lo:
            break
    raise SpectrumError(f"cannot allocate {c!r}: units not available")


def release(s: UnitSet, c: CU) -> UnitSet:
    """Return the units of ``c`` to ``s``, merging with neighbors.

    None of the released units may already be present.
    """
    lo, hi = c
    if lo > hi or lo < 0:
        raise SpectrumError(f"malformed CU {c!r}")
    idx = 0
    n = len(s)
    while idx < n and s[idx][1] < lo - 1:
        idx += 1
    new_lo, new_hi = lo, hi
    j = idx
    while j < n and s[j][0] <= hi + 1:
        alo, ahi = s[j]
        if alo <= hi and lo <= ahi:
            raise SpectrumError(f"cannot release {c!r}: unit already present")
        if alo < new_lo:
            new_lo = alo
        if ahi > new_hi:
            new_hi = ahi
        j += 1
    return s[:idx] + ((new_lo, new_hi),) + s[j:]


def first_fit_sub_cu(c: CU, n: int) -> CU:
    """The lowest ``n`` units of ``c``."""
    if n < 1:
        raise SpectrumError(f"sub-CU width must be positive, got {n}")
    if cu_width(c) < n:
        raise SpectrumError(f"CU {c!r} narrower than {n}")
    return (c[0], c[0] + n - 1)


def to_bits(s: UnitSet) -> int:
    """Encode a UnitSet as an integer bit set (bit i == unit i)."""
    x = 0
    for lo, hi in s:
        x |= ((1 << (hi - lo + 1)) - 1) << lo
    return x


def from_bits(x: int) -> UnitSet:
    """Decode an integer bit set into a canonical UnitSet."""
    if x < 0:
        raise SpectrumError("negative bit set")
    out = []
    while x:
        lo = (x & -x).bit_length() - 1
        y = x >> lo
        run = (~y & (y + 1)).bit_length() - 1
        out.append((lo, lo + run - 1))
        x &= x + (1 << lo)  # clear the run just consumed
    return tuple(out)
