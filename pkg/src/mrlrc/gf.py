"""Exact arithmetic in a finite-field tower F_p <= F_q <= F_{q^m}.

Every field element is a plain int.  A mid-level element (F_q, q = p^a)
encodes its coefficient vector over F_p in base p, little-endian with
the constant term first; a top-level element (F_{q^m}) encodes its
coefficient vector over F_q in base q the same way.  The defining
polynomials are the monic irreducibles of the required degree with the
smallest integer encoding of their coefficient vector, found by
ascending exhaustive search (roots, then trial division by low-degree
monic polynomials), so two towers built from the same (p, a, m) are
identical and every code is reproducible across runs.

Levels are addressed by name: ``"prime"`` (F_p), ``"mid"`` (F_q),
``"top"`` (F_{q^m}).  Towers and their element codes are immutable;
all operations are pure functions, safe to share across threads.
"""

from __future__ import annotations

from functools import lru_cache

from . import config
from .errors import FormatError, ParameterError

LEVELS = ("prime", "mid", "top")


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def _prime_factors(n: int) -> list[int]:
    """Distinct prime factors of n, ascending (n fits desk scale)."""
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out.append(n)
    return out


class _PrimeOps:
    """Arithmetic mod a prime, elements 0..p-1."""

    __slots__ = ("size", "char")

    def __init__(self, p: int):
        self.size = p
        self.char = p

    def add(self, x, y):
        return (x + y) % self.size

    def sub(self, x, y):
        return (x - y) % self.size

    def neg(self, x):
        return (-x) % self.size

    def mul(self, x, y):
        return (x * y) % self.size

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(x, self.size - 2, self.size)

    def pow(self, x, e):
        if e < 0:
            raise ParameterError("negative exponent")
        return pow(x, e, self.size)

    def tables(self):
        return None


class _ExtOps:
    """Arithmetic in an extension of a base field by a monic irreducible.

    Elements are ints: base-`base.size` little-endian digit strings of
    the coefficient vector.  Multiplication and inversion go through
    log/exp tables once the field is small enough (config.TABLE_CAP);
    otherwise they fall back to direct polynomial arithmetic.
    """

    __slots__ = (
        "base",
        "char",
        "deg",
        "base_size",
        "size",
        "modulus",
        "_mod_int",
        "_exp",
        "_log",
    )

    def __init__(self, base, modulus):
        self.base = base
        self.char = base.char
        self.deg = len(modulus) - 1
        self.base_size = base.size
        self.size = base.size**self.deg
        self.modulus = tuple(modulus)
        # Bit-packed modulus for the binary fast path (base field F_2).
        self._mod_int = None
        if base.size == 2:
            self._mod_int = sum(c << i for i, c in enumerate(modulus))
        self._exp = None
        self._log = None

    # -- coefficient vector <-> int code ------------------------------
    def decode(self, code):
        s = self.base_size
        out = []
        for _ in range(self.deg):
            code, d = divmod(code, s)
            out.append(d)
        return out

    def encode(self, digits):
        s = self.base_size
        code = 0
        for d in reversed(digits):
            code = code * s + d
        return code

    # -- ring operations ----------------------------------------------
    def add(self, x, y):
        if self.char == 2:
            return x ^ y
        b = self.base
        s = self.base_size
        out = 0
        mult = 1
        while x or y:
            x, dx = divmod(x, s)
            y, dy = divmod(y, s)
            out += b.add(dx, dy) * mult
            mult *= s
        return out

    def sub(self, x, y):
        if self.char == 2:
            return x ^ y
        b = self.base
        s = self.base_size
        out = 0
        mult = 1
        while x or y:
            x, dx = divmod(x, s)
            y, dy = divmod(y, s)
            out += b.sub(dx, dy) * mult
            mult *= s
        return out

    def neg(self, x):
        if self.char == 2:
            return x
        b = self.base
        s = self.base_size
        out = 0
        mult = 1
        while x:
            x, dx = divmod(x, s)
            out += b.neg(dx) * mult
            mult *= s
        return out

    def _mul_raw(self, x, y):
        if self._mod_int is not None:
            mod = self._mod_int
            top = 1 << self.deg
            acc = 0
            while y:
                if y & 1:
                    acc ^= x
                y >>= 1
                x <<= 1
                if x & top:
                    x ^= mod
            return acc
        b = self.base
        d = self.deg
        xs = self.decode(x)
        ys = self.decode(y)
        prod = [0] * (2 * d - 1)
        for i, xi in enumerate(xs):
            if xi:
                for j, yj in enumerate(ys):
                    if yj:
                        prod[i + j] = b.add(prod[i + j], b.mul(xi, yj))
        mod = self.modulus
        for k in range(2 * d - 2, d - 1, -1):
            c = prod[k]
            if c:
                prod[k] = 0
                for t in range(d):
                    mt = mod[t]
                    if mt:
                        prod[k - d + t] = b.sub(prod[k - d + t], b.mul(c, mt))
        return self.encode(prod[:d])

    def _pow_raw(self, x, e):
        acc = 1
        while e:
            if e & 1:
                acc = self._mul_raw(acc, x)
            x = self._mul_raw(x, x)
            e >>= 1
        return acc

    def _find_generator(self):
        n1 = self.size - 1
        factors = _prime_factors(n1)
        for c in range(1, self.size):
            if all(self._pow_raw(c, n1 // f) != 1 for f in factors):
                return c
        raise AssertionError("no multiplicative generator found")

    def _ensure_tables(self):
        if self._exp is not None:
            return True
        if self.size > config.TABLE_CAP:
            return False
        g = self._find_generator()
        n1 = self.size - 1
        exp = [1] * (2 * n1)
        log = [0] * self.size
        v = 1
        for i in range(n1):
            exp[i] = v
            exp[i + n1] = v
            log[v] = i
            v = self._mul_raw(v, g)
        if v != 1:
            raise AssertionError("generator order mismatch")
        self._exp = exp
        self._log = log
        return True

    def mul(self, x, y):
        exp = self._exp
        if exp is None:
            if not self._ensure_tables():
                return self._mul_raw(x, y)
            exp = self._exp
        if x == 0 or y == 0:
            return 0
        return exp[self._log[x] + self._log[y]]

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        if self._exp is None and not self._ensure_tables():
            return self._pow_raw(x, self.size - 2)
        return self._exp[self.size - 1 - self._log[x]]

    def pow(self, x, e):
        if e < 0:
            raise ParameterError("negative exponent")
        if x == 0:
            return 0 if e else 1
        if self._exp is None and not self._ensure_tables():
            return self._pow_raw(x, e)
        return self._exp[(self._log[x] * e) % (self.size - 1)]

    def tables(self):
        if self._ensure_tables():
            return self._exp, self._log
        return None


class Field:
    """Arithmetic view of one tower level; elements are int codes."""

    __slots__ = ("tower", "level", "size", "char", "_ops")

    zero = 0
    one = 1

    def __init__(self, tower, level, ops):
        self.tower = tower
        self.level = level
        self.size = ops.size
        self.char = ops.char
        self._ops = ops

    def add(self, x, y):
        return self._ops.add(x, y)

    def sub(self, x, y):
        return self._ops.sub(x, y)

    def neg(self, x):
        return self._ops.neg(x)

    def mul(self, x, y):
        return self._ops.mul(x, y)

    def inv(self, x):
        return self._ops.inv(x)

    def pow(self, x, e):
        return self._ops.pow(x, e)

    def elements(self) -> range:
        """All elements in ascending code order."""
        return range(self.size)

    def is_generator(self, x) -> bool:
        """True iff x generates the multiplicative group."""
        if x == 0:
            return False
        n1 = self.size - 1
        return all(self.pow(x, n1 // f) != 1 for f in _prime_factors(n1))

    def tables(self):
        """(exp, log) lists for hot loops, or None for large fields."""
        return self._ops.tables()

    def __repr__(self):
        return f"Field({self.level}, size={self.size})"


# -- polynomial helpers for the irreducibility search -----------------


def _poly_eval(ops, poly, x):
    acc = 0
    for c in reversed(poly):
        acc = ops.add(ops.mul(acc, x), c)
    return acc


def _poly_rem(ops, num, den):
    """Remainder of num modulo a monic den (coefficient lists)."""
    work = list(num)
    d = len(den) - 1
    for k in range(len(work) - 1, d - 1, -1):
        c = work[k]
        if c:
            base = k - d
            for t in range(d):
                dt = den[t]
                if dt:
                    work[base + t] = ops.sub(work[base + t], ops.mul(c, dt))
            work[k] = 0
    return work[:d]


def _rem_gf2(num: int, den: int, den_deg: int) -> int:
    while num.bit_length() - 1 >= den_deg:
        num ^= den << (num.bit_length() - 1 - den_deg)
    return num


def _is_irreducible(ops, poly) -> bool:
    deg = len(poly) - 1
    if deg == 1:
        return True
    for x in range(ops.size):
        if _poly_eval(ops, poly, x) == 0:
            return False
    if ops.size == 2:
        num = sum(c << i for i, c in enumerate(poly))
        for e in range(2, deg // 2 + 1):
            for low in range(1 << e):
                if _rem_gf2(num, low | (1 << e), e) == 0:
                    return False
        return True
    for e in range(2, deg // 2 + 1):
        for low in range(ops.size**e):
            den = _digits(low, ops.size, e) + [1]
            if not any(_poly_rem(ops, poly, den)):
                return False
    return True


def _digits(code: int, base: int, length: int) -> list[int]:
    out = []
    for _ in range(length):
        code, d = divmod(code, base)
        out.append(d)
    return out


def _min_irreducible(ops, degree: int) -> tuple[int, ...]:
    """Monic irreducible of given degree with the smallest encoding."""
    for low in range(ops.size**degree):
        poly = _digits(low, ops.size, degree) + [1]
        if _is_irreducible(ops, poly):
            return tuple(poly)
    raise AssertionError("no irreducible polynomial found")


class FieldTower:
    """The nested fields F_p <= F_q <= F_{q^m} with fixed polynomials.

    Use :func:`make_tower` rather than constructing directly; it caches
    and guarantees the deterministic minimal-polynomial choice.
    """

    __slots__ = ("p", "a", "m", "q", "base_poly", "ext_poly", "_ops", "_fields")

    def __init__(self, p: int, a: int, m: int):
        if not _is_prime(p):
            raise ParameterError(f"p={p} is not prime")
        if a < 1 or m < 1:
            raise ParameterError("extension degrees must be >= 1")
        if p ** (a * m) > config.SIZE_CAP:
            raise ParameterError(
                f"tower size p^(a*m) = {p}^{a * m} exceeds cap {config.SIZE_CAP}"
            )
        self.p = p
        self.a = a
        self.m = m
        self.q = p**a
        prime_ops = _PrimeOps(p)
        if a == 1:
            self.base_poly = None
            mid_ops = prime_ops
        else:
            self.base_poly = _min_irreducible(prime_ops, a)
            mid_ops = _ExtOps(prime_ops, self.base_poly)
        if m == 1:
            self.ext_poly = None
            top_ops = mid_ops
        else:
            self.ext_poly = _min_irreducible(mid_ops, m)
            top_ops = _ExtOps(mid_ops, self.ext_poly)
        self._ops = {"prime": prime_ops, "mid": mid_ops, "top": top_ops}
        self._fields = {}

    # -- level views ---------------------------------------------------
    def field(self, level: str) -> Field:
        if level not in LEVELS:
            raise ParameterError(f"unknown level {level!r}")
        f = self._fields.get(level)
        if f is None:
            f = Field(self, level, self._ops[level])
            self._fields[level] = f
        return f

    def level_size(self, level: str) -> int:
        return self.field(level).size

    def check_code(self, level: str, code: int) -> None:
        if not 0 <= code < self.level_size(level):
            raise ParameterError(f"code {code} out of range for level {level}")

    # -- top-level structure over F_q -----------------------------------
    def frobenius(self, x: int, i: int = 1) -> int:
        """x^(q^i) in the top field; i = 0 is the identity."""
        if i < 0:
            raise ParameterError("frobenius power must be >= 0")
        return self.field("top").pow(x, self.q ** (i % self.m))

    def fq_basis(self) -> list[int]:
        """The polynomial basis 1, y, ..., y^(m-1) as top-level codes."""
        return [self.q**j for j in range(self.m)]

    def top_to_vec(self, code: int) -> list[int]:
        """Coordinates of a top element over F_q, constant term first."""
        return _digits(code, self.q, self.m)

    def vec_to_top(self, coords) -> int:
        code = 0
        for c in reversed(list(coords)):
            code = code * self.q + c
        return code

    # -- identity ------------------------------------------------------
    def _key(self):
        return (self.p, self.a, self.m, self.base_poly, self.ext_poly)

    def __eq__(self, other):
        return isinstance(other, FieldTower) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"FieldTower(p={self.p}, a={self.a}, m={self.m})"


@lru_cache(maxsize=None)
def make_tower(p: int, a: int = 1, m: int = 1) -> FieldTower:
    """Build (or fetch) the tower for (p, a, m); fully deterministic."""
    return FieldTower(p, a, m)


# -- text form ---------------------------------------------------------


def tower_line(t: FieldTower) -> str:
    """One-line text form, e.g. ``p=2 a=1 m=2 ext_poly=1,1,1``."""
    parts = [f"p={t.p}", f"a={t.a}", f"m={t.m}"]
    if t.base_poly is not None:
        parts.append("base_poly=" + ",".join(map(str, t.base_poly)))
    if t.ext_poly is not None:
        parts.append("ext_poly=" + ",".join(map(str, t.ext_poly)))
    return " ".join(parts)


def parse_tower_line(line: str) -> FieldTower:
    fields = {}
    for token in line.split():
        if "=" not in token:
            raise FormatError(f"bad tower token {token!r}")
        key, val = token.split("=", 1)
        fields[key] = val
    try:
        p = int(fields["p"])
        a = int(fields["a"])
        m = int(fields["m"])
    except (KeyError, ValueError) as exc:
        raise FormatError(f"bad tower line {line!r}") from exc
    try:
        t = make_tower(p, a, m)
    except ParameterError as exc:
        raise FormatError(str(exc)) from exc
    for name, poly in (("base_poly", t.base_poly), ("ext_poly", t.ext_poly)):
        if name in fields:
            declared = tuple(int(c) for c in fields[name].split(","))
            if poly is None or declared != poly:
                raise FormatError(f"{name} in file does not match the deterministic choice")
        elif poly is not None:
            raise FormatError(f"missing {name} for degree > 1")
    return t
