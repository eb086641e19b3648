"""Minimal symbolic coefficient language: rationals, variables, +, -, *, /,
and exp of subexpressions, with differentiation, evaluation, and a
sum-of-products canonical form for decidable equality.

Serialization uses prefix s-expressions, e.g. ``(* (exp (- x1 x5)) x2)``;
rational literals are written ``p/q``.
"""

from fractions import Fraction
import gmpy2

__all__ = ["Expr", "ExprError", "const", "var", "parse_expr"]

_PREC = 113  # mpfr mantissa bits for the inexact evaluation path


class ExprError(ValueError):
    pass


def _as_expr(v):
    if isinstance(v, Expr):
        return v
    return const(v)


class Expr:
    """Immutable expression tree node.

    kind is one of 'const', 'var', 'add', 'mul', 'div', 'neg', 'exp';
    'const' carries a Fraction in .value, 'var' a 1-based index in .index,
    the rest carry children in .args.
    """

    __slots__ = ("kind", "value", "index", "args")

    def __init__(self, kind, value=None, index=None, args=()):
        self.kind = kind
        self.value = value
        self.index = index
        self.args = tuple(args)

    # -- construction ------------------------------------------------

    def __add__(self, other):
        return Expr("add", args=(self, _as_expr(other)))

    __radd__ = __add__

    def __neg__(self):
        return Expr("neg", args=(self,))

    def __sub__(self, other):
        return self + (-_as_expr(other))

    def __rsub__(self, other):
        return _as_expr(other) + (-self)

    def __mul__(self, other):
        return Expr("mul", args=(self, _as_expr(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return Expr("div", args=(self, _as_expr(other)))

    def __rtruediv__(self, other):
        return Expr("div", args=(_as_expr(other), self))

    # -- calculus ----------------------------------------------------

    def diff(self, v):
        """Partial derivative with respect to variable index v."""
        k = self.kind
        if k in ("const",):
            return const(0)
        if k == "var":
            return const(1 if self.index == v else 0)
        if k == "add":
            return Expr("add", args=tuple(a.diff(v) for a in self.args))
        if k == "neg":
            return -self.args[0].diff(v)
        if k == "mul":
            a, b = self.args
            return a.diff(v) * b + a * b.diff(v)
        if k == "div":
            a, b = self.args
            return (a.diff(v) * b - a * b.diff(v)) / (b * b)
        if k == "exp":
            return self * self.args[0].diff(v)
        raise ExprError("unknown node kind %r" % k)

    def evaluate(self, point):
        """Evaluate at a point {var index: rational}.

        Returns (value, exact). The value is a Fraction when every exp
        argument evaluates to zero, else a gmpy2.mpfr with >=64-bit
        mantissa and exact=False.
        """
        k = self.kind
        if k == "const":
            return self.value, True
        if k == "var":
            if self.index not in point:
                raise ExprError("variable x%d not assigned" % self.index)
            return Fraction(point[self.index]), True
        if k == "add":
            vals = [a.evaluate(point) for a in self.args]
            exact = all(e for _, e in vals)
            if exact:
                return sum((v for v, _ in vals), Fraction(0)), True
            total = gmpy2.mpfr(0, _PREC)
            for v, _ in vals:
                total += _to_mpfr(v)
            return total, False
        if k == "neg":
            v, e = self.args[0].evaluate(point)
            return -v, e
        if k == "mul":
            vals = [a.evaluate(point) for a in self.args]
            exact = all(e for _, e in vals)
            if exact:
                out = Fraction(1)
                for v, _ in vals:
                    out *= v
                return out, True
            out = gmpy2.mpfr(1, _PREC)
            for v, _ in vals:
                out *= _to_mpfr(v)
            return out, False
        if k == "div":
            num, en = self.args[0].evaluate(point)
            den, ed = self.args[1].evaluate(point)
            if den == 0:
                raise ExprError("division by zero in %s" % format_expr(self))
            if en and ed:
                return num / den, True
            return _to_mpfr(num) / _to_mpfr(den), False
        if k == "exp":
            v, e = self.args[0].evaluate(point)
            if e and v == 0:
                return Fraction(1), True
            return gmpy2.exp(_to_mpfr(v)), False
        raise ExprError("unknown node kind %r" % k)

    # -- canonical form and equality ---------------------------------

    def canonical(self):
        """Canonical (numerator, denominator) pair of polynomial dicts;
        see _canon for the representation."""
        return _canon(self)

    def is_zero(self):
        num, _ = _canon(self)
        return not num

    def equals(self, other):
        n1, d1 = _canon(self)
        n2, d2 = _canon(_as_expr(other))
        return _poly_mul(n1, d2) == _poly_mul(n2, d1)

    def variables(self):
        out = set()
        _collect_vars(self, out)
        return out

    def __repr__(self):
        return "Expr(%s)" % format_expr(self)


def _to_mpfr(v):
    if isinstance(v, Fraction):
        return gmpy2.mpfr(gmpy2.mpq(v.numerator, v.denominator), _PREC)
    return v


def _collect_vars(e, out):
    if e.kind == "var":
        out.add(e.index)
    for a in e.args:
        _collect_vars(a, out)


def const(v):
    return Expr("const", value=Fraction(v))


def var(i):
    if i < 1:
        raise ExprError("variable indices are 1-based")
    return Expr("var", index=int(i))


# ---------------------------------------------------------------------
# Canonical form.
#
# A polynomial is a dict {monomial: Fraction}; a monomial is a pair
# (vars, expkey) where vars is a sorted tuple of (index, power) and
# expkey freezes the canonical form of the combined exp-exponent
# (None when the exponent is zero).  Expressions normalize to a
# (numerator, denominator) polynomial pair; equality is decided by
# cross-multiplication, so no polynomial gcd is needed.
# ---------------------------------------------------------------------

_ONE_MONO = ((), None)


def _poly_const(c):
    c = Fraction(c)
    return {_ONE_MONO: c} if c else {}


def _poly_add(p, q):
    out = dict(p)
    for m, c in q.items():
        s = out.get(m, Fraction(0)) + c
        if s:
            out[m] = s
        else:
            out.pop(m, None)
    return out


def _poly_neg(p):
    return {m: -c for m, c in p.items()}


def _mono_mul(m1, m2):
    v1, e1 = m1
    v2, e2 = m2
    powers = dict(v1)
    for i, k in v2:
        powers[i] = powers.get(i, 0) + k
    vars_part = tuple(sorted(powers.items()))
    if e1 is None:
        ekey = e2
    elif e2 is None:
        ekey = e1
    else:
        ekey = _freeze_frac(_frac_add(_thaw(e1), _thaw(e2)))
    return (vars_part, ekey)


def _poly_mul(p, q):
    out = {}
    for m1, c1 in p.items():
        for m2, c2 in q.items():
            m = _mono_mul(m1, m2)
            s = out.get(m, Fraction(0)) + c1 * c2
            if s:
                out[m] = s
            else:
                out.pop(m, None)
    return out


def _frac_add(f1, f2):
    n1, d1 = f1
    n2, d2 = f2
    if d1 == d2:
        return _frac_normalize(_poly_add(n1, n2), d1)
    return _frac_normalize(_poly_add(_poly_mul(n1, d2), _poly_mul(n2, d1)),
                           _poly_mul(d1, d2))


def _frac_normalize(num, den):
    if not den:
        raise ExprError("zero denominator in canonical form")
    if not num:
        return {}, _poly_const(1)
    lead = den[min(den, key=repr)]
    if lead != 1:
        num = {m: c / lead for m, c in num.items()}
        den = {m: c / lead for m, c in den.items()}
    return num, den


def _freeze_frac(f):
    num, den = f
    return (tuple(sorted(num.items(), key=repr)),
            tuple(sorted(den.items(), key=repr)))


def _thaw(key):
    num, den = key
    return dict(num), dict(den)


def _canon(e):
    k = e.kind
    if k == "const":
        return _poly_const(e.value), _poly_const(1)
    if k == "var":
        return {(((e.index, 1),), None): Fraction(1)}, _poly_const(1)
    if k == "add":
        out = _poly_const(0), _poly_const(1)
        for a in e.args:
            out = _frac_add(out, _canon(a))
        return out
    if k == "neg":
        n, d = _canon(e.args[0])
        return _poly_neg(n), d
    if k == "mul":
        n, d = _poly_const(1), _poly_const(1)
        for a in e.args:
            na, da = _canon(a)
            n, d = _poly_mul(n, na), _poly_mul(d, da)
        return _frac_normalize(n, d)
    if k == "div":
        n1, d1 = _canon(e.args[0])
        n2, d2 = _canon(e.args[1])
        if not n2:
            raise ExprError("division by the zero expression")
        return _frac_normalize(_poly_mul(n1, d2), _poly_mul(d1, n2))
    if k == "exp":
        f = _canon(e.args[0])
        if not f[0]:
            return _poly_const(1), _poly_const(1)
        mono = ((), _freeze_frac(f))
        return {mono: Fraction(1)}, _poly_const(1)
    raise ExprError("unknown node kind %r" % k)


# ---------------------------------------------------------------------
# S-expression serialization
# ---------------------------------------------------------------------

def format_expr(e):
    k = e.kind
    if k == "const":
        v = e.value
        if v.denominator == 1:
            return str(v.numerator)
        return "%d/%d" % (v.numerator, v.denominator)
    if k == "var":
        return "x%d" % e.index
    if k == "neg":
        return "(- %s)" % format_expr(e.args[0])
    if k == "exp":
        return "(exp %s)" % format_expr(e.args[0])
    op = {"add": "+", "mul": "*", "div": "/"}[k]
    return "(%s %s)" % (op, " ".join(format_expr(a) for a in e.args))


def _tokenize(s):
    return s.replace("(", " ( ").replace(")", " ) ").split()


def parse_expr(text):
    tokens = _tokenize(text)
    pos = [0]

    def parse():
        if pos[0] >= len(tokens):
            raise ExprError("unexpected end of expression")
        tok = tokens[pos[0]]
        pos[0] += 1
        if tok == ")":
            raise ExprError("unexpected ')'")
        if tok != "(":
            return _atom(tok)
        if pos[0] >= len(tokens):
            raise ExprError("unexpected end after '('")
        op = tokens[pos[0]]
        pos[0] += 1
        args = []
        while pos[0] < len(tokens) and tokens[pos[0]] != ")":
            args.append(parse())
        if pos[0] >= len(tokens):
            raise ExprError("missing ')'")
        pos[0] += 1
        return _apply(op, args)

    e = parse()
    if pos[0] != len(tokens):
        raise ExprError("trailing tokens: %s" % " ".join(tokens[pos[0]:]))
    return e


def _atom(tok):
    if tok.startswith("x") and tok[1:].isdigit():
        return var(int(tok[1:]))
    try:
        if "/" in tok:
            num, den = tok.split("/")
            return const(Fraction(int(num), int(den)))
        return const(int(tok))
    except (ValueError, ZeroDivisionError) as exc:
        raise ExprError("bad atom %r" % tok) from exc


def _apply(op, args):
    if op == "+":
        if not args:
            raise ExprError("'+' needs arguments")
        return Expr("add", args=args)
    if op == "*":
        if not args:
            raise ExprError("'*' needs arguments")
        return Expr("mul", args=args)
    if op == "-":
        if len(args) == 1:
            return -args[0]
        if len(args) == 2:
            return args[0] - args[1]
        raise ExprError("'-' takes 1 or 2 arguments")
    if op == "/":
        if len(args) != 2:
            raise ExprError("'/' takes 2 arguments")
        return Expr("div", args=args)
    if op == "exp":
        if len(args) != 1:
            raise ExprError("'exp' takes 1 argument")
        return Expr("exp", args=args)
    raise ExprError("unknown operator %r" % op)
