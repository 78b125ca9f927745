ALPHA = 'alpha'
APP_NAME = 'DualArrangements'
APP_SHORTNAME = 'arrange'
BETA = 'beta'
BOUNDED = 'bounded'
CHECKS = 'checks'
COMMAND = 'command'
DEFAULT_ENTRY_RANGE = 3
DEFAULT_LOG_LEVEL = 'INFO'
DEFAULT_QUAD_DEGREE = 32
DEFAULT_QUAD_MAX_REFINEMENTS = 6
DEFAULT_QUAD_TOLERANCE = 1e-10
DEFAULT_REMATCHINGS = 3
DEFAULT_SEED = 20240229
DEFAULT_VERIFY_TOLERANCE = 1e-6
DEFAULT_WORKERS = 1
DET_COMPLETION = 'detB'
DUAL_MATRIX = 'C'
ERROR = 'error'
EXIT_DOMAIN_ERROR = 3
EXIT_FAILED = 1
EXIT_INVALID_ARGUMENTS = 2
EXIT_OK = 0
FAIL = 'fail'
INPUTS_DIGEST = 'inputsDigest'
K = 'k'
LOG_LEVEL_PARAM = 'LOG_LEVEL'
MESSAGE = 'message'
NOT_APPLICABLE = 'not-applicable'
PAIR_MATRIX = 'B'
PASS = 'pass'
QUAD_DEGREE_PARAM = 'ARRANGE_QUAD_DEGREE'
QUAD_REFINEMENTS_PARAM = 'ARRANGE_QUAD_REFINEMENTS'
QUAD_REFINEMENT_STEP = 8
QUAD_TOLERANCE_PARAM = 'ARRANGE_QUAD_TOLERANCE'
REFERENCE = 'reference'
RESULTS = 'results'
SIDE_DUAL = 'dual'
SIDE_PRIMAL = 'primal'
SUMMARY_TEMPLATE = 'template/summary.pystache'
TOLERANCE = 'tolerance'
VALUE = 'value'
VERDICT = 'verdict'
VERIFY_ALL = 'all'
VERIFY_CHOICES = ['matroid', 'minors', 'plucker', 'weak', 'geometry', 'evaluation', 'main', 'all']
WORKERS_PARAM = 'ARRANGE_WORKERS'
