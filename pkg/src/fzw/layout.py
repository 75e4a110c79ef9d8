"""Build layered Terms by tracking labelled wires.

A ``Wiring`` holds the current left-to-right list of wire labels and the
layers emitted so far.  Boxes are applied to named wires; if the wires are not
adjacent and in order they are first brought together with crossings.
"""
from __future__ import annotations

from typing import Hashable, Sequence

from .terms import FSWAP, SWAP, Gen, Generator, Id, Term, layer, seq

Label = Hashable


class Wiring:
    def __init__(self, inputs: Sequence[Label] = ()):
        self.wires: list[Label] = list(inputs)
        self.n_in = len(self.wires)
        self.layers: list[Term] = []

    def __len__(self) -> int:
        return len(self.wires)

    def emit(self, pos: int, t: Term, outputs: Sequence[Label]) -> None:
        if len(outputs) != t.n_out:
            raise ValueError("output label count does not match the box")
        self.layers.append(layer(len(self.wires), pos, t))
        self.wires[pos:pos + t.n_in] = list(outputs)

    def cross(self, pos: int, crossing: Generator = SWAP) -> None:
        a, b = self.wires[pos], self.wires[pos + 1]
        self.emit(pos, Gen(crossing), [b, a])

    def move(self, label: Label, target: int, crossing: Generator = SWAP) -> None:
        i = self.wires.index(label)
        while i > target:
            self.cross(i - 1, crossing)
            i -= 1
        while i < target:
            self.cross(i, crossing)
            i += 1

    def gather(self, labels: Sequence[Label], crossing: Generator = SWAP,
               at: int | None = None) -> int:
        """Make labels adjacent and ordered; returns the first position."""
        if not labels:
            return len(self.wires) if at is None else at
        start = min(self.wires.index(x) for x in labels) if at is None else at
        for k, x in enumerate(labels):
            self.move(x, start + k, crossing)
        return start

    def apply(self, t: Term, inputs: Sequence[Label], outputs: Sequence[Label],
              crossing: Generator = SWAP, at: int | None = None) -> None:
        if len(inputs) != t.n_in:
            raise ValueError("input label count does not match the box")
        pos = self.gather(inputs, crossing, at)
        self.emit(pos, t, outputs)

    def state(self, t: Term, outputs: Sequence[Label], at: int | None = None) -> None:
        """Place a 0-input box, by default on the right."""
        self.emit(len(self.wires) if at is None else at, t, outputs)

    def arrange(self, order: Sequence[Label], crossing: Generator = SWAP) -> None:
        if sorted(map(repr, order)) != sorted(map(repr, self.wires)):
            raise ValueError("arrange needs a permutation of the current wires")
        for k, x in enumerate(order):
            self.move(x, k, crossing)

    def term(self) -> Term:
        return seq(*self.layers) if self.layers else Id(self.n_in)


def fermionic_reorder(order: Sequence[Label], target: Sequence[Label]) -> Wiring:
    """Wiring that permutes ``order`` into ``target`` using fermionic swaps only."""
    w = Wiring(order)
    w.arrange(target, FSWAP)
    return w
