import json

import fastjsonschema

import arrangelib.exactla as la
import arrangelib.parameters as params
from arrangelib.exceptions import InvalidArgumentsException
from arrangelib.periods import WeightSystem

RATIONAL_PATTERN = r"^-?[0-9]+(/[0-9]*[1-9][0-9]*)?$"

PAIR_FILE_SCHEMA = {
    "type": "object",
    "properties": {
        params.K: {"type": "integer", "minimum": 1},
        params.PAIR_MATRIX: {
            "type": "array",
            "minItems": 2,
            "items": {"type": "array", "minItems": 1,
                      "items": {"type": "string", "pattern": RATIONAL_PATTERN}}
        },
        params.ALPHA: {
            "type": "array",
            "minItems": 1,
            "items": {"type": "string", "pattern": RATIONAL_PATTERN}
        }
    },
    "required": [params.K, params.PAIR_MATRIX],
    "additionalProperties": False
}


class PairFileValidator:
    _schema = None
    _schema_validator = None
    _usage_count = 0

    def __init__(self, schema: dict = PAIR_FILE_SCHEMA):
        self._schema = schema
        self._schema_validator = fastjsonschema.compile(self._schema)
        self._usage_count = 0

    def validate_item(self, item: dict):
        try:
            self._schema_validator(item)
            self._usage_count += 1
        except Exception as e:
            raise InvalidArgumentsException(str(e))


_validator = PairFileValidator()


class PairFile:
    k = None
    B = None
    alpha = None

    def __init__(self, k: int, B: la.ExactMatrix, alpha: list = None):
        self.k = k
        self.B = B
        self.alpha = alpha

    @property
    def N(self) -> int:
        return self.B.ncols - 1

    def weights(self) -> WeightSystem:
        return WeightSystem([1] * self.N if self.alpha is None else self.alpha)

    def to_json(self):
        out = {params.K: self.k, params.PAIR_MATRIX: self.B.to_json()}
        if self.alpha is not None:
            out[params.ALPHA] = [la.format_rational(a) for a in self.alpha]
        return out


def parse_pair(content: dict) -> PairFile:
    _validator.validate_item(content)

    k = content[params.K]
    B = la.ExactMatrix(content[params.PAIR_MATRIX])
    if B.nrows != k + 1:
        raise InvalidArgumentsException(f"Matrix B needs k+1 = {k + 1} rows, found {B.nrows}")

    alpha = content.get(params.ALPHA)
    if alpha is not None:
        alpha = [la.to_rational(a) for a in alpha]
        if len(alpha) != B.ncols - 1:
            raise InvalidArgumentsException(f"Expected {B.ncols - 1} weights, found {len(alpha)}")
        if any(a <= 0 for a in alpha):
            raise InvalidArgumentsException("Weights must be positive")

    return PairFile(k, B, alpha)


def load_pair_file(path: str) -> PairFile:
    try:
        with open(path) as f:
            content = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise InvalidArgumentsException(f"Cannot read pair file {path}: {e}")
    return parse_pair(content)
