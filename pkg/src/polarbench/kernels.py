"""Kernels, code specs, recursive encoding, and their text serialization.

A kernel is a bijection g: F^ell -> F^ell. A code of length ell^m applies g
recursively: the input splits into ell consecutive blocks, each block is
encoded by the length ell^(m-1) map, and output position ell*i+j carries
g_j of the i-th column of the ell partial codewords.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .gf import Alphabet, alphabet


class InvalidKernelError(ValueError):
    pass


class FrozenMismatchError(ValueError):
    pass


TABLE_LIMIT = 1 << 20  # exhaustive bijectivity check bound
MARGINAL_LIMIT = 4096  # q**ell bound for marginalization support


def _pack(symbols, q: int) -> int:
    """Mixed-radix index, first symbol most significant."""
    s = 0
    for v in symbols:
        s = s * q + int(v)
    return s


def _unpack(idx: int, q: int, width: int) -> tuple[int, ...]:
    out = []
    for _ in range(width):
        out.append(idx % q)
        idx //= q
    return tuple(reversed(out))


@dataclass(eq=False)
class Kernel:
    """Bijective map over F^ell with optional generator and glue grouping.

    table[i] holds the ell output symbols for the input whose mixed-radix
    packing is i (input 0 most significant). glue partitions the input
    coordinates into consecutive groups that are decided jointly.
    Immutable after construction; safe to share between decoders.
    """

    ell: int
    alph: Alphabet
    table: np.ndarray
    generator: np.ndarray | None = None
    glue: tuple[tuple[int, ...], ...] = ()
    name: str = ""
    _marg_cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        q = self.alph.q
        if self.ell < 2:
            raise InvalidKernelError("kernel dimension must be >= 2")
        if q**self.ell > TABLE_LIMIT:
            raise InvalidKernelError(
                f"q**ell = {q**self.ell} exceeds exhaustive-check limit {TABLE_LIMIT}"
            )
        self.table = np.asarray(self.table, dtype=np.int64)
        if self.table.shape != (q**self.ell, self.ell):
            raise InvalidKernelError("kernel table has wrong shape")
        self.alph.check_symbols(self.table)
        packed = self.table @ (q ** np.arange(self.ell - 1, -1, -1, dtype=np.int64))
        if len(np.unique(packed)) != q**self.ell:
            raise InvalidKernelError("kernel map is not a bijection")
        if not self.glue:
            self.glue = tuple((i,) for i in range(self.ell))
        self._check_glue()
        if self.generator is not None:
            self.generator = np.asarray(self.generator, dtype=np.int64)
            if self.generator.shape != (self.ell, self.ell):
                raise InvalidKernelError("generator must be ell x ell")

    def _check_glue(self):
        flat = [i for grp in self.glue for i in grp]
        if flat != list(range(self.ell)):
            raise InvalidKernelError(
                "glue groups must partition 0..ell-1 into consecutive runs"
            )
        for grp in self.glue:
            if list(grp) != list(range(grp[0], grp[0] + len(grp))):
                raise InvalidKernelError("glue group is not consecutive")

    # mapping ---------------------------------------------------------------
    @property
    def q(self) -> int:
        return self.alph.q

    def map(self, u) -> tuple[int, ...]:
        return tuple(int(v) for v in self.table[_pack(u, self.q)])

    def map_columns(self, cols: np.ndarray) -> np.ndarray:
        """Apply g to each row of cols (shape (n, ell)) at once."""
        radix = self.q ** np.arange(self.ell - 1, -1, -1, dtype=np.int64)
        return self.table[cols @ radix]

    @property
    def is_arikan(self) -> bool:
        return self.name == "arikan"

    def group_at(self, boundary: int) -> tuple[int, ...]:
        """The glue group starting at input coordinate `boundary`."""
        for grp in self.glue:
            if grp[0] == boundary:
                return grp
        raise ValueError(f"coordinate {boundary} is not a glue-group boundary")

    def marginal_table(self, boundary: int, prefix: tuple[int, ...]) -> np.ndarray:
        """Output-symbol lookup for marginalizing the group at `boundary`.

        Returns int array with shape (q**w, n_suffix, ell): entry [t, s, j]
        is g_j(prefix, group value t, suffix s). Cached per (boundary, prefix).
        """
        key = (boundary, prefix)
        tab = self._marg_cache.get(key)
        if tab is not None:
            return tab
        if len(prefix) != boundary:
            raise ValueError("prefix length must equal the group boundary")
        q = self.q
        grp = self.group_at(boundary)
        w = len(grp)
        n_suf = self.ell - boundary - w
        out = np.empty((q**w, q**n_suf, self.ell), dtype=np.int64)
        for t in range(q**w):
            gv = _unpack(t, q, w)
            for s in range(q**n_suf):
                sv = _unpack(s, q, n_suf)
                out[t, s] = self.table[_pack(prefix + gv + sv, q)]
        self._marg_cache[key] = out
        return out


def kernel_arikan() -> Kernel:
    """The (u+v, v) kernel over GF(2)."""
    a = alphabet(2)
    table = np.array([[0, 0], [1, 1], [1, 0], [0, 1]], dtype=np.int64)
    gen = np.array([[1, 0], [1, 1]], dtype=np.int64)
    return Kernel(ell=2, alph=a, table=table, generator=gen, name="arikan")


def kernel_linear(G, q: int = 2, glue=None) -> Kernel:
    """Kernel u -> u.G over GF(q). G must be invertible."""
    G = np.asarray(G, dtype=np.int64)
    ell = G.shape[0]
    if G.shape != (ell, ell):
        raise InvalidKernelError("G must be square")
    a = alphabet(q)
    a.check_symbols(G)
    rows = []
    for idx in range(q**ell):
        u = _unpack(idx, q, ell)
        rows.append(a.matvec(np.array(u), G))
    table = np.array(rows, dtype=np.int64)
    glue_t = tuple(tuple(g) for g in glue) if glue else ()
    arikan_gen = np.array([[1, 0], [1, 1]])
    name = "arikan" if (q == 2 and ell == 2 and np.array_equal(G, arikan_gen)) else ""
    return Kernel(ell=ell, alph=a, table=table, generator=G, glue=glue_t, name=name)


def kernel_from_table(table, q: int = 2, glue=None, name: str = "") -> Kernel:
    """Kernel from an explicit output table (supports non-linear maps)."""
    table = np.asarray(table, dtype=np.int64)
    ell = table.shape[1]
    glue_t = tuple(tuple(g) for g in glue) if glue else ()
    return Kernel(ell=ell, alph=alphabet(q), table=table, glue=glue_t, name=name)


# --------------------------------------------------------------------------


@dataclass(eq=False)
class CodeSpec:
    """A code: kernel, recursion depth m, and frozen coordinates.

    frozen maps input index -> pinned symbol value.
    """

    kernel: Kernel
    m: int
    frozen: dict[int, int] = field(default_factory=dict)

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("m must be >= 1")
        n = self.n
        for i, v in self.frozen.items():
            if not (0 <= i < n):
                raise ValueError(f"frozen index {i} out of range for N={n}")
            if not (0 <= v < self.kernel.q):
                raise ValueError(f"frozen value {v} not a field symbol")

    @property
    def n(self) -> int:
        return self.kernel.ell**self.m

    @property
    def k_info(self) -> int:
        return self.n - len(self.frozen)

    @property
    def rate(self) -> float:
        return self.k_info / self.n

    def info_indices(self) -> list[int]:
        return [i for i in range(self.n) if i not in self.frozen]

    def frozen_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        mask = np.zeros(self.n, dtype=bool)
        vals = np.zeros(self.n, dtype=np.int64)
        for i, v in self.frozen.items():
            mask[i] = True
            vals[i] = v
        return mask, vals

    def assemble(self, info_symbols) -> np.ndarray:
        """Full input word from the information payload (frozen pinned)."""
        u = np.zeros(self.n, dtype=np.int64)
        idx = self.info_indices()
        info_symbols = np.asarray(info_symbols, dtype=np.int64)
        if len(info_symbols) != len(idx):
            raise ValueError("payload length does not match information size")
        u[idx] = info_symbols
        for i, v in self.frozen.items():
            u[i] = v
        return u


def _encode_rec(kernel: Kernel, u: np.ndarray) -> np.ndarray:
    n = len(u)
    ell = kernel.ell
    if n == ell:
        return kernel.table[_pack(u, kernel.q)].copy()
    blk = n // ell
    parts = np.stack([_encode_rec(kernel, u[r * blk : (r + 1) * blk]) for r in range(ell)], axis=1)
    return kernel.map_columns(parts).reshape(-1)


def _encode_arikan(u: np.ndarray) -> np.ndarray:
    # iterative butterflies, small spans first: the top-level combine acts
    # on already-encoded halves
    x = u.copy()
    n = len(x)
    span = 2
    while span <= n:
        half = span // 2
        x2 = x.reshape(-1, span)
        v = x2[:, :half] ^ x2[:, half:]
        w = x2[:, half:].copy()
        x2[:, 0::2] = v
        x2[:, 1::2] = w
        span *= 2
    return x


def encode(spec: CodeSpec, u) -> np.ndarray:
    """Codeword for input u. u must honor the frozen pins."""
    u = np.asarray(u, dtype=np.int64)
    if u.shape != (spec.n,):
        raise ValueError(f"u must have length {spec.n}")
    spec.kernel.alph.check_symbols(u)
    for i, v in spec.frozen.items():
        if u[i] != v:
            raise FrozenMismatchError(f"u[{i}]={u[i]} but coordinate is pinned to {v}")
    return encode_unchecked(spec.kernel, u)


def encode_unchecked(kernel: Kernel, u: np.ndarray) -> np.ndarray:
    if kernel.is_arikan:
        return _encode_arikan(np.asarray(u, dtype=np.int64))
    return _encode_rec(kernel, np.asarray(u, dtype=np.int64))


def encode_matrix(spec: CodeSpec) -> np.ndarray:
    """Matrix M with encode(u) = u.M over the field (linear kernels only)."""
    if spec.kernel.generator is None:
        raise InvalidKernelError("encode_matrix requires a linear kernel")
    n = spec.n
    M = np.empty((n, n), dtype=np.int64)
    for i in range(n):
        e = np.zeros(n, dtype=np.int64)
        e[i] = 1
        M[i] = encode_unchecked(spec.kernel, e)
    return M


# text serialization --------------------------------------------------------

GRAMMAR_DOC = """\
CodeSpec text format, one directive per line, '#' starts a comment:

  kernel ell=<int> q=<int>     header, required first
  G <s0> <s1> ... <s_ell-1>    generator row (ell rows for linear kernels;
                               omitted entirely => Arikan map, needs ell=2 q=2)
  glue <i> .. ; <j> .. ; ...   glue groups (';'-separated, default singletons)
  m <int>                      recursion depth (makes the file a CodeSpec)
  frozen <idx>[=<val>] ...     frozen coordinates, value defaults to 0
"""


def dump_kernel(kernel: Kernel) -> str:
    if kernel.generator is None and not kernel.is_arikan:
        raise InvalidKernelError("serialization requires a generator matrix")
    lines = [f"kernel ell={kernel.ell} q={kernel.q}"]
    if kernel.generator is not None:
        for row in kernel.generator:
            lines.append("G " + " ".join(str(int(v)) for v in row))
    if any(len(g) > 1 for g in kernel.glue):
        lines.append("glue " + " ; ".join(" ".join(str(i) for i in g) for g in kernel.glue))
    return "\n".join(lines) + "\n"


def dump_codespec(spec: CodeSpec) -> str:
    text = dump_kernel(spec.kernel)
    text += f"m {spec.m}\n"
    if spec.frozen:
        toks = []
        for i in sorted(spec.frozen):
            v = spec.frozen[i]
            toks.append(f"{i}={v}" if v else str(i))
        text += "frozen " + " ".join(toks) + "\n"
    return text


class SpecFormatError(ValueError):
    pass


def _parse_lines(text: str):
    header = None
    g_rows: list[list[int]] = []
    glue = None
    m = None
    frozen: dict[int, int] = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        kw = tok[0]
        if kw == "kernel":
            opts = dict(t.split("=", 1) for t in tok[1:])
            try:
                header = (int(opts["ell"]), int(opts["q"]))
            except (KeyError, ValueError) as e:
                raise SpecFormatError(f"bad kernel header: {line!r}") from e
        elif kw == "G":
            g_rows.append([int(v) for v in tok[1:]])
        elif kw == "glue":
            groups = " ".join(tok[1:]).split(";")
            glue = [tuple(int(v) for v in grp.split()) for grp in groups]
        elif kw == "m":
            m = int(tok[1])
        elif kw == "frozen":
            for t in tok[1:]:
                if "=" in t:
                    i, v = t.split("=", 1)
                    frozen[int(i)] = int(v)
                else:
                    frozen[int(t)] = 0
        else:
            raise SpecFormatError(f"unknown directive {kw!r}")
    if header is None:
        raise SpecFormatError("missing kernel header line")
    return header, g_rows, glue, m, frozen


def load_kernel(text: str) -> Kernel:
    (ell, q), g_rows, glue, _m, _frozen = _parse_lines(text)
    if g_rows:
        if len(g_rows) != ell or any(len(r) != ell for r in g_rows):
            raise SpecFormatError("expected ell generator rows of ell symbols")
        return kernel_linear(np.array(g_rows), q=q, glue=glue)
    if ell == 2 and q == 2:
        k = kernel_arikan()
        if glue:
            k = kernel_linear(k.generator, q=2, glue=glue)
        return k
    raise SpecFormatError("no G rows given and no default map for this ell/q")


def load_codespec(text: str) -> CodeSpec:
    (ell, q), g_rows, glue, m, frozen = _parse_lines(text)
    if m is None:
        raise SpecFormatError("missing 'm' directive")
    kernel = load_kernel(text)
    return CodeSpec(kernel=kernel, m=m, frozen=frozen)
