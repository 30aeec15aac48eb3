from typing import Optional

MAX_RETRIES: int = 5


def annotated(value: int, label: str = "def not_code():") -> Optional[str]:
    count: int = value + MAX_RETRIES
    return str(count) if count else None


class Typed:
    field: "class ForwardRef" = None

    def convert(self, raw: bytes) -> str:
        return raw.decode()
