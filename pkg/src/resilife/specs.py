"""Parsers for the distribution and mixing spec strings used on the command line.

Baselines::

    exp(rate)  weibull(shape,scale)  hyperexp(p1:l1,p2:l2,...)
    loglogistic(shape,scale)  tabulated(path)

Mixings::

    degenerate(theta)  atoms(t1:p1,t2:p2,...)  cont(<baseline>)
    os(<baseline>,k,n)  ce61_h1  ce61_h2
"""

from __future__ import annotations

import re

from .distributions import Exponential, HyperExponential, LifetimeDistribution, LogLogistic, Tabulated, Weibull
from .mixing import Continuous, Degenerate, DiscreteAtoms, MixingDistribution, OrderStatistic, ce61_h1, ce61_h2

_NUMBER = re.compile(r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")
_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


class SpecError(ValueError):
    """Malformed spec string; ``column`` is 1-based."""

    def __init__(self, message, text="", column=1):
        super().__init__(f"{message} at column {column} in {text!r}")
        self.text = text
        self.column = column


class _Cursor:
    def __init__(self, text):
        self.text = text
        self.pos = 0

    def error(self, message, pos=None):
        return SpecError(message, self.text, (self.pos if pos is None else pos) + 1)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch):
        if self.peek() != ch:
            found = self.peek() or "end of input"
            raise self.error(f"expected {ch!r}, found {found!r}")
        self.pos += 1

    def match(self, pattern, what):
        self.skip()
        m = pattern.match(self.text, self.pos)
        if not m:
            raise self.error(f"expected {what}")
        self.pos = m.end()
        return m.group(0)

    def number(self):
        return float(self.match(_NUMBER, "a number"))

    def integer(self):
        start = self.pos
        value = self.number()
        if value != int(value):
            raise self.error("expected an integer", start)
        return int(value)

    def pairs(self):
        out = [self._pair()]
        while self.peek() == ",":
            self.pos += 1
            out.append(self._pair())
        return out

    def _pair(self):
        a = self.number()
        self.expect(":")
        return a, self.number()

    def done(self):
        if self.peek():
            raise self.error(f"unexpected trailing {self.peek()!r}")


def _call(cur, build, start):
    try:
        return build()
    except SpecError:
        raise
    except (ValueError, TypeError, OSError) as exc:
        raise cur.error(str(exc), start) from None


def _baseline(cur) -> LifetimeDistribution:
    start = cur.pos
    name = cur.match(_NAME, "a distribution name").lower()
    cur.expect("(")
    if name == "exp":
        rate = cur.number()
        dist = _call(cur, lambda: Exponential(rate), start)
    elif name == "weibull":
        shape = cur.number()
        cur.expect(",")
        scale = cur.number()
        dist = _call(cur, lambda: Weibull(shape, scale), start)
    elif name == "loglogistic":
        shape = cur.number()
        cur.expect(",")
        scale = cur.number()
        dist = _call(cur, lambda: LogLogistic(shape, scale), start)
    elif name == "hyperexp":
        pairs = cur.pairs()
        dist = _call(cur, lambda: HyperExponential([p for p, _ in pairs], [r for _, r in pairs]), start)
    elif name == "tabulated":
        cur.skip()
        end = cur.text.find(")", cur.pos)
        if end < 0:
            raise cur.error("unterminated path")
        path = cur.text[cur.pos : end].strip()
        if not path:
            raise cur.error("empty path")
        cur.pos = end
        dist = _call(cur, lambda: Tabulated.from_csv(path), start)
    else:
        raise cur.error(f"unknown distribution {name!r}", start)
    cur.expect(")")
    return dist


def _mixing(cur) -> MixingDistribution:
    start = cur.pos
    name = cur.match(_NAME, "a mixing name").lower()
    if name in ("ce61_h1", "ce61_h2"):
        return ce61_h1() if name == "ce61_h1" else ce61_h2()
    cur.expect("(")
    if name == "degenerate":
        theta = cur.number()
        mix = _call(cur, lambda: Degenerate(theta), start)
    elif name == "atoms":
        pairs = cur.pairs()
        mix = _call(cur, lambda: DiscreteAtoms([t for t, _ in pairs], [p for _, p in pairs]), start)
    elif name == "cont":
        mix = Continuous(_baseline(cur))
    elif name == "os":
        base = _baseline(cur)
        cur.expect(",")
        k = cur.integer()
        cur.expect(",")
        n = cur.integer()
        mix = _call(cur, lambda: OrderStatistic(base, k, n), start)
    else:
        raise cur.error(f"unknown mixing {name!r}", start)
    cur.expect(")")
    return mix


def parse_distribution(text: str) -> LifetimeDistribution:
    """Build a baseline from its spec string.

    >>> parse_distribution("hyperexp(0.25:1,0.75:2)").mean()
    0.625
    """
    cur = _Cursor(text)
    dist = _baseline(cur)
    cur.done()
    return dist


def parse_mixing(text: str) -> MixingDistribution:
    cur = _Cursor(text)
    mix = _mixing(cur)
    cur.done()
    return mix


__all__ = ["SpecError", "parse_distribution", "parse_mixing"]
