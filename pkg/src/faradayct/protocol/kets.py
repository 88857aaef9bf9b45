"""Evaluate printed ket expressions (LaTeX source) into state vectors.

The bundled equation and table files keep the LaTeX exactly as printed, e.g.::

    \\frac{1}{2\\sqrt{2}}\\Big(|0\\rangle_{B}\\big[-\\alpha(|L\\rangle+i|R\\rangle)|0\\rangle_{A}|0\\rangle_{C} ...

:func:`parse` turns such a string into a :class:`KetSum`, a map from basis
assignments ``{label: bit}`` to numeric coefficients, with ``\\alpha`` and
``\\beta`` bound to the payload amplitudes supplied by the caller.

Subscripts name subsystems. Capital letters with optional digits are atoms
(``B_{1}`` is ``B1``); a bare digit is a photon number looked up in
``KetContext.photon_numbers``. A polarization symbol without a matching
subscript entry belongs to ``KetContext.photon``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from ..errors import TableFormatError

_SKIP = re.compile(r"\s+|&|\\\\|\\notag|\\nonumber|\\,|\\;|\\!|\\quad")
_SIZE = re.compile(r"\\(?:big|Big|bigg|Bigg|left|right)(?![a-zA-Z])")
_KET = re.compile(r"\|\s*([LR01 ]+?)\s*\\rangle(?:_\{((?:[^{}]|\{[^{}]*\})*)\}|_([A-Za-z0-9]))?")
_NUMBER = re.compile(r"\d+(?:\.\d+)?")
_OPEN = {"(": ")", "[": "]", "\\{": "\\}", "{": "}"}
_CLOSE = {")", "]", "\\}", "}"}


@dataclass(frozen=True)
class KetContext:
    """How subscripts in one equation or table map onto register labels."""

    photon: str = "F"
    photon_numbers: Mapping[str, str] = field(default_factory=dict)
    bare: Sequence[str] | None = None  # labels for a multi-symbol ket printed without subscript
    photons: frozenset[str] = frozenset()

    def is_photon(self, label: str) -> bool:
        return label in self.photons or label == self.photon or label in self.photon_numbers.values()


class KetSum(dict):
    """``{((label, bit), ...): coefficient}`` with keys sorted by label."""

    @classmethod
    def scalar(cls, c: complex) -> KetSum:
        return cls({(): complex(c)})

    def labels(self) -> set[frozenset[str]]:
        return {frozenset(lbl for lbl, _ in key) for key in self}

    def __add__(self, other: KetSum) -> KetSum:
        out = KetSum(self)
        for k, v in other.items():
            out[k] = out.get(k, 0) + v
        return out

    def __neg__(self) -> KetSum:
        return KetSum({k: -v for k, v in self.items()})

    def __mul__(self, other: KetSum) -> KetSum:
        out = KetSum()
        for k1, v1 in self.items():
            l1 = {lbl for lbl, _ in k1}
            for k2, v2 in other.items():
                clash = l1 & {lbl for lbl, _ in k2}
                if clash:
                    raise TableFormatError(f"subsystem(s) {sorted(clash)} appear twice in one product")
                key = tuple(sorted(k1 + k2))
                out[key] = out.get(key, 0) + v1 * v2
        return out

    def to_vector(self, order: Sequence[str]) -> np.ndarray:
        """Dense amplitudes over ``order`` (first label = most significant bit)."""
        want = frozenset(order)
        vec = np.zeros(2 ** len(order), dtype=complex)
        for key, c in self.items():
            if c == 0:
                continue
            bits = dict(key)
            if frozenset(bits) != want:
                raise TableFormatError(
                    f"term over {sorted(bits)} does not match subsystems {sorted(want)}"
                )
            idx = 0
            for lbl in order:
                idx = 2 * idx + bits[lbl]
            vec[idx] += c
        return vec

    def basis_assignment(self) -> dict[str, int]:
        """The single basis state of a one-term, unit-coefficient ket."""
        if len(self) != 1:
            raise TableFormatError("expected a single basis ket")
        (key, _), = self.items()
        return dict(key)


def _subscript_labels(sub: str, ctx: KetContext) -> list[str]:
    sub = re.sub(r"\s+", "", sub)
    sub = re.sub(r"_\{(\d+)\}|_(\d)", lambda m: m.group(1) or m.group(2), sub)
    sub = sub.replace("{", "").replace("}", "")
    tokens = re.findall(r"[A-Z]\d*|\d", sub)
    if "".join(tokens) != sub:
        raise TableFormatError(f"cannot read subscript {sub!r}")
    labels = []
    for t in tokens:
        if t.isdigit():
            if t not in ctx.photon_numbers:
                raise TableFormatError(f"photon number {t!r} is not defined here")
            labels.append(ctx.photon_numbers[t])
        else:
            labels.append(t)
    return labels


def ket_labels(symbols: str, sub: str | None, ctx: KetContext) -> list[str]:
    """Assign each ket symbol (L/R/0/1) to a register label."""
    if sub is None:
        if len(symbols) == 1 and symbols in "LR":
            return [ctx.photon]
        if ctx.bare is not None and len(ctx.bare) == len(symbols):
            return list(ctx.bare)
        raise TableFormatError(f"ket |{symbols}> has no subscript")
    labels = _subscript_labels(sub, ctx)
    if len(labels) == len(symbols):
        pass
    elif len(labels) + 1 == len(symbols) and symbols[0] in "LR":
        labels = [ctx.photon] + labels
    else:
        raise TableFormatError(f"ket |{symbols}>_{{{sub}}}: {len(symbols)} symbols for {labels}")
    for s, lbl in zip(symbols, labels):
        if (s in "LR") != ctx.is_photon(lbl):
            raise TableFormatError(f"ket |{symbols}>_{{{sub}}}: symbol {s!r} cannot label {lbl}")
    return labels


def make_ket(symbols: str, sub: str | None, ctx: KetContext) -> KetSum:
    symbols = symbols.replace(" ", "")
    labels = ket_labels(symbols, sub, ctx)
    key = tuple(sorted((lbl, 0 if s in "L0" else 1) for s, lbl in zip(symbols, labels)))
    return KetSum({key: 1 + 0j})


_WORDS = (
    ("\\frac", "frac", "frac"),
    ("\\sqrt", "sqrt", "sqrt"),
    ("\\alpha", "sym", "alpha"),
    ("\\beta", "sym", "beta"),
    ("\\phi_{0}", "sym", "phi0"),
    ("\\phi", "sym", "phi"),
    ("e^", "exp", "exp"),
)


class _Parser:
    def __init__(self, text: str, ctx: KetContext, values: Mapping[str, complex]):
        self.tokens = self._tokenize(text, ctx)
        self.pos = 0
        self.values = values

    @staticmethod
    def _tokenize(text: str, ctx: KetContext) -> list[tuple[str, object]]:
        text = _SIZE.sub("", text)
        out: list[tuple[str, object]] = []
        i = 0
        while i < len(text):
            m = _SKIP.match(text, i)
            if m:
                i = m.end()
                continue
            if text.startswith("\\langle", i):
                raise TableFormatError("bras are not supported")
            m = _KET.match(text, i)
            if m:
                sub = m.group(2) if m.group(2) is not None else m.group(3)
                out.append(("ket", make_ket(m.group(1), sub, ctx)))
                i = m.end()
                continue
            m = _NUMBER.match(text, i)
            if m:
                out.append(("num", float(m.group())))
                i = m.end()
                continue
            for word, kind, name in _WORDS:
                if text.startswith(word, i) and not text[i + len(word): i + len(word) + 1].isalpha():
                    out.append((kind, name))
                    i += len(word)
                    break
            else:
                two = text[i: i + 2]
                ch = text[i]
                if two in ("\\{", "\\}"):
                    out.append(("open" if two == "\\{" else "close", two))
                    i += 2
                elif ch in "([{":
                    out.append(("open", ch))
                    i += 1
                elif ch in ")]}":
                    out.append(("close", ch))
                    i += 1
                elif ch in "+-":
                    out.append(("op", ch))
                    i += 1
                elif ch == "i" and not text[i + 1: i + 2].isalpha():
                    out.append(("num", 1j))
                    i += 1
                elif ch in ".,":
                    i += 1  # sentence punctuation after a displayed equation
                else:
                    raise TableFormatError(f"unexpected input at {text[i:i + 25]!r}")
        return out

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None)

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def parse(self) -> KetSum:
        val = self.expr()
        if self.pos != len(self.tokens):
            raise TableFormatError(f"unbalanced input near token {self.peek()}")
        return val

    def expr(self) -> KetSum:
        total = KetSum()
        sign = 1
        first = True
        while True:
            kind, tok = self.peek()
            if kind == "op":
                self.take()
                sign = -sign if tok == "-" else sign
                continue
            if kind in (None, "close"):
                if first:
                    raise TableFormatError("empty expression")
                return total
            term = self.term()
            total = total + (-term if sign < 0 else term)
            sign, first = 1, False

    def term(self) -> KetSum:
        val = self.factor()
        while self.peek()[0] not in (None, "op", "close"):
            val = val * self.factor()
        return val

    def group(self) -> KetSum:
        kind, tok = self.take()
        if kind != "open":
            raise TableFormatError(f"expected a group, got {tok!r}")
        val = self.expr()
        kind, close = self.take()
        if kind != "close" or close != _OPEN[tok]:
            raise TableFormatError(f"mismatched bracket {tok!r} ... {close!r}")
        return val

    def scalar_group(self) -> complex:
        val = self.group()
        if set(val) - {()}:
            raise TableFormatError("kets inside a numeric argument")
        return val.get((), 0)

    def factor(self) -> KetSum:
        kind, tok = self.peek()
        if kind == "open":
            return self.group()
        self.take()
        if kind == "num":
            return KetSum.scalar(tok)
        if kind == "ket":
            return tok
        if kind == "sym":
            try:
                return KetSum.scalar(self.values[tok])
            except KeyError:
                raise TableFormatError(f"no value bound for \\{tok}") from None
        if kind == "frac":
            num = self.scalar_group()
            den = self.scalar_group()
            return KetSum.scalar(num / den)
        if kind == "sqrt":
            return KetSum.scalar(np.sqrt(self.scalar_group()))
        if kind == "exp":
            return KetSum.scalar(np.exp(self.scalar_group()))
        raise TableFormatError(f"unexpected token {tok!r}")


def parse(
    text: str,
    ctx: KetContext,
    alpha: complex = 1.0,
    beta: complex = 0.0,
    phi: float = np.pi,
    phi0: float = np.pi / 2,
) -> KetSum:
    """Evaluate a LaTeX ket expression numerically.

    ``\\alpha, \\beta`` are the payload amplitudes; ``\\phi, \\phi_{0}`` the
    reflection phases with and without coupling (standard tuning by default).
    """
    values = {"alpha": alpha, "beta": beta, "phi": phi, "phi0": phi0}
    return _Parser(text, ctx, values).parse()


def strip_lhs(text: str) -> str:
    """Drop a leading ``|\\phi_{4}\\rangle=`` style left-hand side."""
    m = re.match(r"\s*\|\\?[A-Za-z]+(?:_\{[^}]*\}|_\w)?(?:\^\{[^}]*\})?\\rangle\s*&?=\s*&?", text)
    return text[m.end():] if m else text
