from __future__ import annotations

from dataclasses import dataclass, field

from ..core import YNoteError


class ConversionError(YNoteError):
    """Raised when a source file cannot be converted.

    ``code`` is a stable kebab-case name such as ``unsupported-construct``.
    """

    def __init__(self, code: str, message: str = ""):
        self.code = code
        super().__init__(f"{code}: {message}" if message else code)


@dataclass
class LossReport:
    source_format: str
    dropped: list[str] = field(default_factory=list)
    quantized_notes: int = 0

    @property
    def dropped_events(self) -> int:
        return len(self.dropped)

    @property
    def is_empty(self) -> bool:
        return not self.dropped and not self.quantized_notes

    def drop(self, reason: str) -> None:
        self.dropped.append(reason)

    def summary(self) -> str:
        line = (f"{self.source_format}: {self.dropped_events} dropped events, "
                f"{self.quantized_notes} quantized notes")
        if self.dropped:
            reasons: dict[str, int] = {}
            for r in self.dropped:
                reasons[r] = reasons.get(r, 0) + 1
            line += " (" + ", ".join(f"{r} x{n}" for r, n in reasons.items()) + ")"
        return line
