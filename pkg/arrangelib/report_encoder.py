import json
from enum import Enum
from fractions import Fraction

import numpy as np


class ReportEncoder(json.JSONEncoder):
    def default(self, o):
        if isinstance(o, Fraction):
            if o.denominator == 1:
                return str(o.numerator)
            else:
                return f"{o.numerator}/{o.denominator}"
        elif isinstance(o, complex) or isinstance(o, np.complexfloating):
            return [float(o.real), float(o.imag)]
        elif isinstance(o, (set, frozenset)):
            return sorted(o)
        elif isinstance(o, Enum):
            return o.value
        elif isinstance(o, np.integer):
            return int(o)
        elif isinstance(o, np.floating):
            return float(o)
        elif isinstance(o, np.bool_):
            return bool(o)
        elif isinstance(o, np.ndarray):
            return o.tolist()
        elif hasattr(o, "to_json"):
            return o.to_json()
        else:
            return super(ReportEncoder, self).default(o)
