from typing import Dict, List, Literal

from pydantic import BaseModel, Field

CheckStatus = Literal["passed", "failed", "info", "error"]


class CheckResult(BaseModel):
  name: str
  status: CheckStatus
  message: str = ""
  details: Dict[str, str] = Field(default_factory=dict)


class Report(BaseModel):
  title: str
  checks: List[CheckResult] = Field(default_factory=list)

  @property
  def ok(self) -> bool:
    return all(check.status in ("passed", "info") for check in self.checks)

  def add(self, name: str, status: CheckStatus, message: str = "", **details: str) -> CheckResult:
    check = CheckResult(name=name, status=status, message=message, details=details)
    self.checks.append(check)
    return check

  def counts(self) -> Dict[str, int]:
    totals = {"passed": 0, "failed": 0, "info": 0, "error": 0}
    for check in self.checks:
      totals[check.status] += 1
    return totals
