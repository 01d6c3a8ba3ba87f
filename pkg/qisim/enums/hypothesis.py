from enum import IntEnum


class Hypothesis(IntEnum):
    ABSENT = 0
    PRESENT = 1

    def flipped(self) -> "Hypothesis":
        return Hypothesis(1 - self.value)
