"""Simulated network of computational parties with a cost ledger.

All parties run in one process in round lockstep.  Secret multiplication is
a real protocol (local product, degree-t resharing, Lagrange recombination)
whose messages travel through per-pair queues.  Division and conversion are
*ideal gates*: a dealer reconstructs the inputs, computes in the clear and
reshares the result.  That is insecure by construction and exists only so
that programs built on those primitives can be run and costed.
"""

from __future__ import annotations

import json
import logging
from collections import deque
from contextlib import contextmanager
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import NamedTuple, Sequence

from .errors import (
    ConfigurationError,
    IntegrityError,
    RangeOverflowError,
    SchedulingError,
    SimulationError,
)
from .field import DEFAULT_PRIME, PrimeField, parse_modulus
from .gates import IDEAL_KINDS, Gate, GateKind
from .protocols import SecretFixed, SecretInt, add_secret
from .shamir import SharingConfig, interpolate_raw, lagrange_raw, share_raw

log = logging.getLogger(__name__)

PROFILES = ("default", "picco")


@dataclass
class EngineConfig:
    n: int = 3
    t: int = 1
    prime: int = DEFAULT_PRIME
    seed: int | None = 0
    cost_profile: str = "default"
    frac_bits: int = 20
    max_bits: int = 100
    input_bits: int = 32

    def __post_init__(self):
        self.prime = parse_modulus(self.prime)
        if self.cost_profile == "picco-emulation":
            self.cost_profile = "picco"
        if self.cost_profile not in PROFILES:
            raise ConfigurationError(f"unknown cost profile {self.cost_profile!r}")
        if self.t < 1:
            raise ConfigurationError("engine threshold must be at least 1")
        if self.n < 3 or self.n < 2 * self.t + 1:
            raise ConfigurationError(f"need n >= 3 and n >= 2t+1, got n={self.n}, t={self.t}")
        if not 0 < self.frac_bits < self.max_bits:
            raise ConfigurationError("need 0 < frac_bits < max_bits")
        if not 0 < self.input_bits <= self.max_bits:
            raise ConfigurationError("need 0 < input_bits <= max_bits")
        if self.prime <= 2 ** (2 * self.max_bits + 8):
            raise ConfigurationError(
                f"prime must exceed 2^(2*max_bits+8) = 2^{2 * self.max_bits + 8}")

    @classmethod
    def from_dict(cls, d: dict) -> EngineConfig:
        known = set(cls.__dataclass_fields__)
        extra = set(d) - known
        if extra:
            raise ConfigurationError(f"unknown config keys: {sorted(extra)}")
        return cls(**d)

    @classmethod
    def from_file(cls, path) -> EngineConfig:
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    def to_dict(self) -> dict:
        d = asdict(self)
        d["prime"] = hex(self.prime)
        return d


class GateCost(NamedTuple):
    ops: int
    rounds: int


@dataclass
class GateCostTable:
    """Ops charged per gate instance and rounds charged per batch, by gate kind."""

    costs: dict

    def __getitem__(self, kind: GateKind) -> GateCost:
        return self.costs[kind]

    @classmethod
    def default(cls):
        one = GateCost(1, 1)
        return cls({
            GateKind.MUL: one,
            GateKind.DIV_INT: one,
            GateKind.DIV_FIXED: one,
            GateKind.INT_TO_FIXED: one,
            GateKind.TRUNC_FIXED: one,
            GateKind.ADD_FIXED: GateCost(0, 0),
            GateKind.OPEN: one,
        })

    @classmethod
    def picco(cls):
        # floating additions are interactive in PICCO, which makes the
        # tree-sum depth visible in the ledger
        table = cls.default()
        table.costs[GateKind.ADD_FIXED] = GateCost(1, 1)
        return table

    @classmethod
    def from_profile(cls, name: str):
        if name in ("picco", "picco-emulation"):
            return cls.picco()
        if name == "default":
            return cls.default()
        raise ConfigurationError(f"unknown cost profile {name!r}")


@dataclass
class CostLedger:
    interactive_ops: int = 0
    rounds: int = 0
    bytes_sent: int = 0
    per_gate: dict = field(default_factory=dict)
    dealer_access: dict = field(default_factory=dict)
    phases: dict = field(default_factory=dict)

    def charge(self, counts: dict, table: GateCostTable):
        batch_rounds = 0
        for kind, k in counts.items():
            cost = table[kind]
            entry = self.per_gate.setdefault(kind.value, {"count": 0, "ops": 0, "rounds": 0})
            entry["count"] += k
            entry["ops"] += k * cost.ops
            entry["rounds"] += cost.rounds
            self.interactive_ops += k * cost.ops
            batch_rounds = max(batch_rounds, cost.rounds)
        self.rounds += batch_rounds

    def totals(self) -> dict:
        return {
            "interactive_ops": self.interactive_ops,
            "rounds": self.rounds,
            "bytes_sent": self.bytes_sent,
            "per_gate": {k: dict(v) for k, v in sorted(self.per_gate.items())},
        }

    def snapshot(self) -> dict:
        snap = self.totals()
        snap["dealer_access"] = dict(sorted(self.dealer_access.items()))
        snap["phases"] = {k: dict(v) for k, v in self.phases.items()}
        return snap


def ledger_delta(before: dict, after: dict) -> dict:
    """Difference of two ledger snapshots (counters and per-gate entries)."""
    out = {k: after[k] - before[k] for k in ("interactive_ops", "rounds", "bytes_sent")}
    per = {}
    for kind, entry in after["per_gate"].items():
        prev = before["per_gate"].get(kind, {"count": 0, "ops": 0, "rounds": 0})
        diff = {k: entry[k] - prev[k] for k in entry}
        if diff["count"]:
            per[kind] = diff
    out["per_gate"] = per
    return out


class Party:
    def __init__(self, index: int, rng):
        self.index = index
        self.point = index + 1
        self.rng = rng
        self.pc = 0


class Dealer:
    """Trusted helper for inputs, outputs and ideal gates (simulation only)."""

    def __init__(self, net: PartyNetwork):
        self.net = net
        self.rng = net.sharing.make_rng("dealer")

    def reconstruct(self, x: SecretInt, reason: str) -> int:
        net = self.net
        p = net.field.modulus
        t = net.config.t
        points = list(range(1, net.config.n + 1))
        if len(x.shares) != len(points):
            raise IntegrityError(f"expected {len(points)} shares, got {len(x.shares)}")
        base = points[: t + 1]
        vals = x.shares[: t + 1]
        for pt, v in zip(points[t + 1:], x.shares[t + 1:]):
            if interpolate_raw(base, vals, pt, p) != v:
                raise IntegrityError(f"share of party {pt} is inconsistent with a degree-{t} sharing")
        net.ledger.dealer_access[reason] = net.ledger.dealer_access.get(reason, 0) + 1
        return net.field.decode_signed_raw(interpolate_raw(base, vals, 0, p))

    def reshare(self, value: int, bits: int) -> SecretInt:
        net = self.net
        if abs(value) >= 2**bits:
            raise RangeOverflowError(f"result {value} does not fit the declared {bits}-bit range")
        enc = net.field.encode_signed_raw(value)
        cfg = net.config
        return SecretInt(net, tuple(share_raw(enc, cfg.n, cfg.t, net.field.modulus, self.rng)), bits)


def _trunc_div(a: int, b: int) -> int:
    if b == 0:
        raise ZeroDivisionError("division by a secret zero")
    q = abs(a) // abs(b)
    return q if (a >= 0) == (b >= 0) else -q


class PartyNetwork:
    """n computational parties, a dealer, message queues and a cost ledger."""

    def __init__(self, config: EngineConfig | None = None, **overrides):
        if config is None:
            config = EngineConfig(**overrides)
        elif overrides:
            raise ConfigurationError("pass either a config or keyword overrides, not both")
        self.config = config
        self.field = PrimeField(config.prime)
        self.sharing = SharingConfig(config.n, config.t, self.field, config.seed)
        self.costs = GateCostTable.from_profile(config.cost_profile)
        self.ledger = CostLedger()
        self.round = 0
        self.parties = [Party(i, self.sharing.make_rng(f"party:{i}")) for i in range(config.n)]
        self.dealer = Dealer(self)
        self._queues = {(i, j): deque() for i in range(config.n) for j in range(config.n)}
        self._input_rngs = {}
        self._recomb = lagrange_raw(tuple(range(1, config.n + 1)), 0, self.field.modulus)

    # -- messaging ----------------------------------------------------------

    def send(self, src: int, dst: int, payload: list[int]):
        self._queues[(src, dst)].append((self.round, payload))
        if src != dst:
            self.ledger.bytes_sent += len(payload) * self.field.byte_length

    def receive(self, src: int, dst: int) -> list[int]:
        q = self._queues[(src, dst)]
        if not q:
            raise SimulationError(f"party {dst + 1} expected a message from party {src + 1}")
        sent_round, payload = q[0]
        if sent_round >= self.round:
            raise SimulationError(f"message from party {src + 1} sent in round {sent_round} read in the same round")
        q.popleft()
        return payload

    def advance(self):
        pcs = {p.pc for p in self.parties}
        if len(pcs) != 1:
            raise SimulationError(f"parties diverged from the common schedule: {sorted(pcs)}")
        self.round += 1

    # -- inputs and constants ----------------------------------------------

    def distribute_input(self, party_id: int, values: Sequence[int], bits: int | None = None) -> list[SecretInt]:
        """Secret-share an input party's values among the computational parties."""
        bits = self.config.input_bits if bits is None else bits
        if bits > self.config.max_bits:
            raise ConfigurationError(f"input bitlength {bits} exceeds max_bits={self.config.max_bits}")
        if party_id not in self._input_rngs:
            self._input_rngs[party_id] = self.sharing.make_rng(f"input:{party_id}")
        rng = self._input_rngs[party_id]
        n, t, p = self.config.n, self.config.t, self.field.modulus
        out = []
        for v in values:
            if not isinstance(v, int) or abs(v) >= 2**bits:
                raise RangeOverflowError(f"input {v!r} outside the declared {bits}-bit range")
            enc = self.field.encode_signed_raw(v)
            out.append(SecretInt(self, tuple(share_raw(enc, n, t, p, rng)), bits))
        return out

    def constant(self, c: int, bits: int | None = None) -> SecretInt:
        """A public constant held as a (degree-0) secret."""
        enc = self.field.encode_signed_raw(c)
        need = abs(c).bit_length()
        return SecretInt(self, (enc,) * self.config.n, need if bits is None else max(bits, need))

    # -- scheduling ----------------------------------------------------------

    def run_batch(self, gates: Sequence[Gate]) -> list:
        """Execute mutually independent gates together.

        Rounds advance by the largest per-batch round cost among the kinds
        present; ops advance by the per-instance cost summed over gates.
        """
        gates = list(gates)
        if not gates:
            return []
        members = {id(g) for g in gates}
        for g in gates:
            if g.done:
                raise SchedulingError("gate already executed")
            resolved = []
            for x in g.inputs:
                if isinstance(x, Gate):
                    if id(x) in members:
                        raise SchedulingError(f"{g.kind} gate depends on another gate of the same batch")
                    if not x.done:
                        raise SchedulingError(f"{g.kind} gate depends on a gate that has not run")
                    x = x.result
                if not isinstance(x, (SecretInt, SecretFixed)) or x.net is not self:
                    raise ConfigurationError(f"{g.kind} gate input is not a secret of this network")
                resolved.append(x)
            g.inputs = tuple(resolved)

        by_kind: dict[GateKind, list[Gate]] = {}
        for g in gates:
            by_kind.setdefault(g.kind, []).append(g)
        for kind, group in by_kind.items():
            results = self._execute(kind, group)
            for g, r in zip(group, results):
                g.result = r
                g.done = True
        for p in self.parties:
            p.pc += 1
        counts = {k: len(v) for k, v in by_kind.items()}
        self.ledger.charge(counts, self.costs)
        log.debug("batch %s", {k.value: c for k, c in counts.items()})
        return [g.result for g in gates]

    def _execute(self, kind: GateKind, gates: list[Gate]) -> list:
        if kind is GateKind.MUL:
            return self._multiply([g.inputs for g in gates])
        if kind is GateKind.ADD_FIXED:
            return [SecretFixed(add_secret(a.raw, b.raw), a.f) for a, b in (g.inputs for g in gates)]
        if kind is GateKind.OPEN:
            return [self._open_one(g.inputs[0]) for g in gates]
        if kind in IDEAL_KINDS:
            return [self._ideal(kind, g) for g in gates]
        raise SchedulingError(f"no executor for gate kind {kind}")

    def _multiply(self, pairs) -> list[SecretInt]:
        """Local share products, degree-t resharing, Lagrange recombination: one round."""
        n, t, p = self.config.n, self.config.t, self.field.modulus
        for a, b in pairs:
            if a.bits + b.bits > self.field.signed_capacity:
                raise RangeOverflowError(f"product of {a.bits}- and {b.bits}-bit values may wrap the field")
        for party in self.parties:
            i = party.index
            subs = [share_raw(a.shares[i] * b.shares[i] % p, n, t, p, party.rng) for a, b in pairs]
            for j in range(n):
                self.send(i, j, [s[j] for s in subs])
        self.advance()
        k = len(pairs)
        out = []
        for j in range(n):
            acc = [0] * k
            for i in range(n):
                lam = self._recomb[i]
                msg = self.receive(i, j)
                acc = [x + lam * y for x, y in zip(acc, msg)]
            out.append([x % p for x in acc])
        return [SecretInt(self, tuple(out[j][g] for j in range(n)), a.bits + b.bits)
                for g, (a, b) in enumerate(pairs)]

    def _ideal(self, kind: GateKind, g: Gate):
        dealer = self.dealer
        f, max_bits = self.config.frac_bits, self.config.max_bits
        nbytes = 2 * self.config.n * self.field.byte_length
        self.ledger.bytes_sent += nbytes * len(g.inputs)
        if kind is GateKind.DIV_INT:
            a, b = g.inputs
            q = _trunc_div(dealer.reconstruct(a, "div_int"), dealer.reconstruct(b, "div_int"))
            return dealer.reshare(q, a.bits if g.bits is None else g.bits)
        if kind is GateKind.INT_TO_FIXED:
            (a,) = g.inputs
            v = dealer.reconstruct(a, "int_to_fixed")
            if abs(v) >= 2 ** (max_bits - f):
                raise RangeOverflowError(f"{v} does not fit fixed point with {max_bits - f} integer bits")
            return SecretFixed(dealer.reshare(v * 2**f, min(a.bits + f, max_bits)), f)
        if kind is GateKind.DIV_FIXED:
            a, b = g.inputs
            num = dealer.reconstruct(a.raw, "div_fixed")
            den = dealer.reconstruct(b.raw, "div_fixed")
            return SecretFixed(dealer.reshare(_trunc_div(num * 2**f, den), max_bits), f)
        if kind is GateKind.TRUNC_FIXED:
            (a,) = g.inputs
            v = dealer.reconstruct(a, "trunc_fixed")
            return SecretFixed(dealer.reshare(_trunc_div(v, 2**f), max_bits), f)
        raise SchedulingError(f"{kind} is not an ideal gate")

    # -- outputs -------------------------------------------------------------

    def _open_one(self, x):
        self.ledger.bytes_sent += self.config.n * self.field.byte_length
        if isinstance(x, SecretFixed):
            return Fraction(self.dealer.reconstruct(x.raw, "open"), 2**x.f)
        return self.dealer.reconstruct(x, "open")

    def open(self, x: SecretInt | SecretFixed):
        """Reconstruct for the output party: int for SecretInt, exact Fraction for SecretFixed."""
        return self.run_batch([Gate(GateKind.OPEN, (x,))])[0]

    def open_batch(self, xs) -> list:
        return self.run_batch([Gate(GateKind.OPEN, (x,)) for x in xs])

    # -- accounting ----------------------------------------------------------

    def ledger_report(self) -> dict:
        return self.ledger.snapshot()

    @contextmanager
    def phase(self, name: str):
        """Record the ledger delta of the enclosed block under ``name``."""
        before = self.ledger.totals()
        try:
            yield
        finally:
            delta = ledger_delta(before, self.ledger.totals())
            prev = self.ledger.phases.get(name)
            if prev is None:
                self.ledger.phases[name] = {k: delta[k] for k in ("interactive_ops", "rounds", "bytes_sent")}
            else:
                for k in prev:
                    prev[k] += delta[k]
