"""Resumable statistics runs over a continued-fraction file.

A run streams the partial quotients once, updating the selected statistics
(running Khinchin mean, Levy root, sign changes, record events, Gauss-Kuzmin
counts) and appending CSV rows as it goes.  Every `checkpoint_interval`
quotients the full engine state is serialized; resuming truncates the output
files to the recorded offsets and continues, so an interrupted run finishes
byte-identical to an uninterrupted one.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass
from pathlib import Path

from cflab.contfrac import CFExpansion, ConvergentStream
from cflab.errors import CheckpointError, ConfigError
from cflab.exact import log_of_bigint
from cflab.stats import (
    gauss_kuzmin_theoretical,
    khinchin_constant,
    levy_constant,
)

CHECKPOINT_VERSION = 1
STREAM_STATS = ("khinchin", "levy", "signs", "records", "kuzmin")
KUZMIN_M_MAX = 1000


@dataclass
class StatsConfig:
    cf_path: str
    out_dir: str
    which: tuple[str, ...]
    stride: int = 1
    checkpoint_interval: int = 10_000
    source_name: str = ""
    kuzmin_m_max: int = KUZMIN_M_MAX

    def __post_init__(self):
        bad = [w for w in self.which if w not in STREAM_STATS]
        if bad:
            raise ConfigError(f"unknown statistics: {', '.join(bad)}")
        if self.stride < 1:
            raise ConfigError("stride must be >= 1")
        if not self.source_name:
            self.source_name = Path(self.cf_path).stem
        if not self.which:
            raise ConfigError("no statistics selected")

    def digest(self) -> str:
        payload = json.dumps(
            {
                "cf_path": str(self.cf_path),
                "which": sorted(self.which),
                "stride": self.stride,
                "source_name": self.source_name,
                "kuzmin_m_max": self.kuzmin_m_max,
            },
            sort_keys=True,
        )
        return hashlib.sha256(payload.encode()).hexdigest()


def _canonical_digest(obj: dict) -> str:
    return hashlib.sha256(
        json.dumps(obj, sort_keys=True, separators=(",", ":")).encode()
    ).hexdigest()


class StatsRun:
    """One pass over the quotients of a CF file; resumable."""

    def __init__(self, config: StatsConfig, checkpoint_path: str | Path | None = None):
        self.config = config
        self.checkpoint_path = Path(
            checkpoint_path
            or Path(config.out_dir) / f"{config.source_name}_stats.checkpoint"
        )
        self.cf = CFExpansion.from_text(Path(config.cf_path).read_text())
        self.total = len(self.cf.quotients)
        self.k_ref = khinchin_constant(1e-9)
        self.l_ref = levy_constant()

        self.track_khinchin = "khinchin" in config.which or self._needs_k_aux()
        self.track_levy = "levy" in config.which or self._needs_l_aux()

        # engine state
        self.n = 0
        self.acc_ln = 0.0
        self.stream = ConvergentStream(self.cf)
        self.stream.advance()  # consume n = 0
        self.k_sign = 0
        self.k_signs = 0
        self.l_sign = 0
        self.l_signs = 0
        self.k_best = math.inf
        self.k_records: list[tuple[int, float]] = []
        self.l_best = math.inf
        self.l_records: list[tuple[int, float]] = []
        self.kuzmin_counts = [0] * (config.kuzmin_m_max + 1)  # [overflow] last

    def _needs_k_aux(self) -> bool:
        return bool({"signs", "records"} & set(self.config.which))

    _needs_l_aux = _needs_k_aux

    # --- output files ---

    def _file(self, stat: str) -> Path:
        return Path(self.config.out_dir) / f"{self.config.source_name}_{stat}.csv"

    def output_paths(self) -> dict[str, Path]:
        out = {}
        if "khinchin" in self.config.which:
            out["khinchin"] = self._file("khinchin")
        if "levy" in self.config.which:
            out["levy"] = self._file("levy")
        if "records" in self.config.which:
            out["khinchin_records"] = self._file("khinchin_records")
            out["levy_records"] = self._file("levy_records")
        if "kuzmin" in self.config.which:
            out["kuzmin"] = self._file("kuzmin")
        return out

    def _headers(self) -> dict[str, str]:
        signs = "signs" in self.config.which
        base = "n,value,reference,delta" + (",sign_changes" if signs else "")
        return {"khinchin": base + "\n", "levy": base + "\n"}

    # --- checkpointing ---

    def state(self) -> dict:
        offsets = {}
        for key in ("khinchin", "levy"):
            if key in self.output_paths():
                path = self.output_paths()[key]
                offsets[key] = path.stat().st_size if path.exists() else 0
        payload = {
            "version": CHECKPOINT_VERSION,
            "config_digest": self.config.digest(),
            "config": {
                "cf_path": str(self.config.cf_path),
                "out_dir": str(self.config.out_dir),
                "which": list(self.config.which),
                "stride": self.config.stride,
                "checkpoint_interval": self.config.checkpoint_interval,
                "source_name": self.config.source_name,
                "kuzmin_m_max": self.config.kuzmin_m_max,
            },
            "n": self.n,
            "acc_ln": self.acc_ln.hex(),
            "conv": self.stream.state(),
            "k_sign": self.k_sign,
            "k_signs": self.k_signs,
            "l_sign": self.l_sign,
            "l_signs": self.l_signs,
            "k_best": self.k_best.hex(),
            "k_records": [[n, v.hex()] for n, v in self.k_records],
            "l_best": self.l_best.hex(),
            "l_records": [[n, v.hex()] for n, v in self.l_records],
            "kuzmin_counts": self.kuzmin_counts,
            "offsets": offsets,
        }
        payload["digest"] = _canonical_digest({k: v for k, v in payload.items()})
        return payload

    def save_checkpoint(self) -> None:
        self.checkpoint_path.parent.mkdir(parents=True, exist_ok=True)
        tmp = self.checkpoint_path.with_suffix(".tmp")
        tmp.write_text(json.dumps(self.state()))
        tmp.replace(self.checkpoint_path)

    def load_checkpoint(self, payload: dict) -> None:
        if payload.get("version") != CHECKPOINT_VERSION:
            raise CheckpointError(
                f"checkpoint version {payload.get('version')} != {CHECKPOINT_VERSION}"
            )
        recorded = payload.get("digest")
        body = {k: v for k, v in payload.items() if k != "digest"}
        if _canonical_digest(body) != recorded:
            raise CheckpointError("checkpoint digest mismatch (corrupted file)")
        if payload["config_digest"] != self.config.digest():
            raise CheckpointError("checkpoint belongs to a different configuration")
        self.n = payload["n"]
        self.acc_ln = float.fromhex(payload["acc_ln"])
        self.stream.load_state(payload["conv"])
        self.k_sign = payload["k_sign"]
        self.k_signs = payload["k_signs"]
        self.l_sign = payload["l_sign"]
        self.l_signs = payload["l_signs"]
        self.k_best = float.fromhex(payload["k_best"])
        self.k_records = [(n, float.fromhex(v)) for n, v in payload["k_records"]]
        self.l_best = float.fromhex(payload["l_best"])
        self.l_records = [(n, float.fromhex(v)) for n, v in payload["l_records"]]
        self.kuzmin_counts = payload["kuzmin_counts"]
        # truncate outputs to the recorded offsets
        for key, offset in payload["offsets"].items():
            path = self.output_paths()[key]
            if not path.exists() or path.stat().st_size < offset:
                raise CheckpointError(f"output file {path.name} shorter than checkpoint")
            with open(path, "r+b") as fh:
                fh.truncate(offset)

    @property
    def finished(self) -> bool:
        return self.n >= self.total

    # --- the pass ---

    def run(self, max_steps: int | None = None, resume: bool = False) -> bool:
        """Advance the run; returns True when the pass is complete.

        With max_steps set, stops (after a checkpoint) once that many
        quotients were consumed in this call; used by tests to simulate
        interruption.
        """
        outdir = Path(self.config.out_dir)
        outdir.mkdir(parents=True, exist_ok=True)
        paths = self.output_paths()
        headers = self._headers()
        files = {}
        for key in ("khinchin", "levy"):
            if key in paths and key.split("_")[0] in self.config.which:
                mode = "a" if resume else "w"
                fh = open(paths[key], mode, newline="")
                if not resume:
                    fh.write(headers[key])
                files[key] = fh
        signs = "signs" in self.config.which
        stride = self.config.stride
        interval = self.config.checkpoint_interval
        steps = 0
        try:
            while self.n < self.total:
                if max_steps is not None and steps >= max_steps:
                    for fh in files.values():
                        fh.flush()
                    self.save_checkpoint()
                    return False
                n = self.n + 1
                a = self.cf.quotients[n - 1]
                if self.track_khinchin or "khinchin" in files:
                    self.acc_ln += log_of_bigint(a)
                    k_val = math.exp(self.acc_ln / n)
                    self._update_tracker(n, k_val, self.k_ref, "k")
                    if "khinchin" in files and (n % stride == 0 or n == self.total):
                        files["khinchin"].write(
                            self._row(n, k_val, self.k_ref, self.k_signs, signs)
                        )
                if self.track_levy or "levy" in files:
                    _, q = self.stream.advance()
                    l_val = math.exp(log_of_bigint(q) / n)
                    self._update_tracker(n, l_val, self.l_ref, "l")
                    if "levy" in files and (n % stride == 0 or n == self.total):
                        files["levy"].write(
                            self._row(n, l_val, self.l_ref, self.l_signs, signs)
                        )
                if "kuzmin" in self.config.which:
                    if a <= self.config.kuzmin_m_max:
                        self.kuzmin_counts[a - 1] += 1
                    else:
                        self.kuzmin_counts[-1] += 1
                self.n = n
                steps += 1
                if interval and n % interval == 0:
                    for fh in files.values():
                        fh.flush()
                    self.save_checkpoint()
        finally:
            for fh in files.values():
                fh.close()
        self._write_final_outputs()
        self.save_checkpoint()
        return True

    def _update_tracker(self, n: int, value: float, ref: float, prefix: str) -> None:
        sign = (value > ref) - (value < ref)
        if prefix == "k":
            if sign != 0:
                if self.k_sign != 0 and sign != self.k_sign:
                    self.k_signs += 1
                self.k_sign = sign
            d = abs(value - ref)
            if d < self.k_best:
                self.k_best = d
                if "records" in self.config.which:
                    self.k_records.append((n, value))
        else:
            if sign != 0:
                if self.l_sign != 0 and sign != self.l_sign:
                    self.l_signs += 1
                self.l_sign = sign
            d = abs(value - ref)
            if d < self.l_best:
                self.l_best = d
                if "records" in self.config.which:
                    self.l_records.append((n, value))

    @staticmethod
    def _row(n: int, value: float, ref: float, signs_count: int, signs: bool) -> str:
        base = f"{n},{value!r},{ref!r},{value - ref!r}"
        if signs:
            base += f",{signs_count}"
        return base + "\n"

    def _write_final_outputs(self) -> None:
        paths = self.output_paths()
        if "records" in self.config.which:
            for key, records, ref in (
                ("khinchin_records", self.k_records, self.k_ref),
                ("levy_records", self.l_records, self.l_ref),
            ):
                with open(paths[key], "w", newline="") as fh:
                    fh.write("n,value,reference,delta\n")
                    for n, v in records:
                        fh.write(f"{n},{v!r},{ref!r},{v - ref!r}\n")
        if "kuzmin" in self.config.which:
            with open(paths["kuzmin"], "w", newline="") as fh:
                fh.write("m,count,frequency,theoretical\n")
                total = self.total
                for m in range(1, self.config.kuzmin_m_max + 1):
                    c = self.kuzmin_counts[m - 1]
                    fh.write(
                        f"{m},{c},{c / total!r},{gauss_kuzmin_theoretical(m)!r}\n"
                    )
                c = self.kuzmin_counts[-1]
                fh.write(f">{self.config.kuzmin_m_max},{c},{c / total!r},\n")
