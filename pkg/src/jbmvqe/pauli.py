"""Pauli-string types, the Hamiltonian container, and its text format.

A Hamiltonian file is UTF-8 text with `# key = value` header lines
(`n_qubits` required) followed by term lines of the form

    <coefficient> <factor> <factor> ...

where each factor is ``X<i>``, ``Y<i>`` or ``Z<i>`` and a lone ``I``
denotes the identity term. Qubit 0 is the leftmost letter of a
serialized Pauli string and the least-significant bit of basis-state
integers.
"""

from __future__ import annotations

from dataclasses import dataclass, field

_LETTERS = frozenset("IXYZ")

# header keys that may appear at most once
_KNOWN_META = ("n_qubits", "n_electrons", "molecule", "basis", "geometry",
               "note", "hf_energy", "fci_energy")


class HamiltonianParseError(ValueError):
    """Raised on malformed Hamiltonian text; carries the line number."""

    def __init__(self, lineno, message):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


@dataclass(frozen=True)
class PauliOperator:
    """An n-qubit tensor product of single-qubit Paulis, e.g. ``XIZY``."""

    letters: str

    def __post_init__(self):
        if not self.letters or not set(self.letters) <= _LETTERS:
            raise ValueError(f"invalid Pauli letters: {self.letters!r}")

    @property
    def n_qubits(self):
        return len(self.letters)

    @property
    def is_identity(self):
        return set(self.letters) == {"I"}

    @property
    def x_mask(self):
        """Bit mask of qubits carrying X or Y."""
        return sum(1 << i for i, c in enumerate(self.letters) if c in "XY")

    @property
    def z_mask(self):
        """Bit mask of qubits carrying Z or Y."""
        return sum(1 << i for i, c in enumerate(self.letters) if c in "ZY")

    @property
    def y_count(self):
        return self.letters.count("Y")

    def __str__(self):
        return self.letters


@dataclass(frozen=True)
class PauliTerm:
    coefficient: float
    operator: PauliOperator

    def __post_init__(self):
        c = float(self.coefficient)
        if c != c or c in (float("inf"), float("-inf")):
            raise ValueError("coefficient must be finite")


@dataclass(frozen=True)
class Hamiltonian:
    """H = sum_j lambda_j P_j plus a scalar identity offset."""

    n_qubits: int
    terms: tuple
    identity_offset: float = 0.0
    metadata: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        for t in self.terms:
            if t.operator.n_qubits != self.n_qubits:
                raise ValueError("term width differs from n_qubits")
            if t.operator.is_identity:
                raise ValueError("identity terms belong in identity_offset")


def qwc_compatible(a: PauliOperator, b: PauliOperator) -> bool:
    """True iff the operators commute qubit-wise (equal or I at each site)."""
    if a.n_qubits != b.n_qubits:
        raise ValueError("operators act on different qubit counts")
    return all(x == y or x == "I" or y == "I"
               for x, y in zip(a.letters, b.letters))


def term_count(h: Hamiltonian) -> int:
    """Number of non-identity Pauli terms (M in the literature)."""
    return len(h.terms)


def _parse_factor(tok, n_qubits, lineno):
    letter, idx = tok[0], tok[1:]
    if letter not in "XYZ" or not idx.isdigit():
        raise HamiltonianParseError(lineno, f"unknown factor {tok!r}")
    q = int(idx)
    if q >= n_qubits:
        raise HamiltonianParseError(
            lineno, f"qubit index {q} out of range (n_qubits = {n_qubits})")
    return letter, q


def parse_hamiltonian(text: str) -> Hamiltonian:
    """Parse Hamiltonian text; duplicate operators are coefficient-summed.

    Merged coefficients below 1e-12 in magnitude are dropped. Identity
    terms fold into the returned ``identity_offset``.
    """
    metadata = {}
    n_qubits = None
    merged = {}
    offset = 0.0
    order = []

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if "=" not in body:
                continue  # plain comment
            key, _, value = body.partition("=")
            key, value = key.strip(), value.strip()
            if key in metadata:
                raise HamiltonianParseError(lineno, f"duplicate header {key!r}")
            metadata[key] = value
            if key == "n_qubits":
                try:
                    n_qubits = int(value)
                except ValueError:
                    raise HamiltonianParseError(lineno, "n_qubits must be an integer")
                if n_qubits <= 0:
                    raise HamiltonianParseError(lineno, "n_qubits must be positive")
            continue

        if n_qubits is None:
            raise HamiltonianParseError(lineno, "term before n_qubits header")
        toks = line.split()
        try:
            coeff = float(toks[0])
        except ValueError:
            raise HamiltonianParseError(lineno, f"bad coefficient {toks[0]!r}")
        factors = toks[1:]
        if factors == ["I"] or not factors:
            offset += coeff
            continue
        letters = ["I"] * n_qubits
        for tok in factors:
            letter, q = _parse_factor(tok, n_qubits, lineno)
            if letters[q] != "I":
                raise HamiltonianParseError(lineno, f"qubit {q} repeated")
            letters[q] = letter
        key = "".join(letters)
        if key not in merged:
            merged[key] = 0.0
            order.append(key)
        merged[key] += coeff

    if n_qubits is None:
        raise HamiltonianParseError(0, "missing n_qubits header")

    terms = tuple(PauliTerm(merged[k], PauliOperator(k))
                  for k in order if abs(merged[k]) >= 1e-12)
    return Hamiltonian(n_qubits=n_qubits, terms=terms,
                       identity_offset=offset, metadata=metadata)


def serialize_hamiltonian(h: Hamiltonian) -> str:
    """Render a Hamiltonian back to text; terms sorted by operator string."""
    lines = [f"# n_qubits = {h.n_qubits}"]
    for key in _KNOWN_META[1:]:
        if key in h.metadata:
            lines.append(f"# {key} = {h.metadata[key]}")
    if h.identity_offset != 0.0:
        lines.append(f"{h.identity_offset!r} I")
    for t in sorted(h.terms, key=lambda t: t.operator.letters):
        factors = " ".join(f"{c}{i}" for i, c in enumerate(t.operator.letters)
                           if c != "I")
        lines.append(f"{t.coefficient!r} {factors}")
    return "\n".join(lines) + "\n"


def load_fixture(name: str) -> Hamiltonian:
    """Parse one of the bundled molecule fixtures, e.g. ``"h2"``."""
    import importlib.resources as res
    text = (res.files("jbmvqe") / "fixtures" / f"{name}.ham").read_text()
    return parse_hamiltonian(text)
