import enum
from typing import Any, Dict, List, Optional

import orjson
from pydantic import BaseModel, Field


class Verdict(str, enum.Enum):
    PASS = "pass"
    FAIL = "fail"
    SKIP = "skip"


class CheckResult(BaseModel):
    name: str
    passed: int = 0
    failed: int = 0
    skipped: bool = False
    note: Optional[str] = None
    first_failure_index: Optional[int] = None
    counterexample: Optional[Dict[str, Any]] = None

    @property
    def verdict(self) -> Verdict:
        if self.failed:
            return Verdict.FAIL
        if self.skipped:
            return Verdict.SKIP
        return Verdict.PASS

    def record(self, ok: bool, witness: Optional[Dict[str, Any]] = None, index: int = 0) -> bool:
        """Count one evaluation; keep the witness with the lowest sample index."""
        if ok:
            self.passed += 1
            return True
        self.failed += 1
        if self.first_failure_index is None or index < self.first_failure_index:
            self.first_failure_index = index
            self.counterexample = witness or {}
        return False

    def skip(self, note: str) -> "CheckResult":
        self.skipped = True
        self.note = note
        return self


class SuiteConfig(BaseModel):
    suite: str
    ring: str
    samples: int = Field(default=50, ge=0)
    seed: int = 0
    gamma: Optional[str] = None
    norm_search_cap: int = Field(default=5000, ge=0)
    frame_mover_tries: int = Field(default=200, ge=1)
    mutate: bool = False


class Report(BaseModel):
    suite: str
    config: Dict[str, Any] = {}
    checks: List[CheckResult] = []
    notes: List[str] = []
    wall_time: float = 0.0

    @property
    def verdict(self) -> Verdict:
        verdicts = [c.verdict for c in self.checks]
        if Verdict.FAIL in verdicts:
            return Verdict.FAIL
        if verdicts and all(v is Verdict.SKIP for v in verdicts):
            return Verdict.SKIP
        return Verdict.PASS

    @property
    def exit_code(self) -> int:
        return {Verdict.PASS: 0, Verdict.FAIL: 1, Verdict.SKIP: 3}[self.verdict]

    def check(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def add(self, result: CheckResult) -> CheckResult:
        self.checks.append(result)
        return result

    def to_json(self, include_time: bool = True) -> bytes:
        data = self.model_dump(mode="json")
        data["verdict"] = self.verdict.value
        if not include_time:
            data.pop("wall_time")
        return orjson.dumps(data, option=orjson.OPT_SORT_KEYS | orjson.OPT_INDENT_2)
