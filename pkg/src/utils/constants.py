CONFIG_FILENAME = "config.ini"
CONFIG_ENV = "HARB_CONFIG"
NODE_BUDGET_ENV = "HARB_NODE_BUDGET"

DEFAULT_NODE_BUDGET = 10**9
DEFAULT_FIELDS = (2, 3)
SUPPORTED_PRIMES = (2, 3, 5, 7, 11, 13)
MAX_DEGREE = 10

SCHEMA_VERSION = 1
DECIMAL_PLACES = 6

# exit codes are a stable contract
EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2
EXIT_INCONCLUSIVE = 3
EXIT_INTEGRITY = 4

TABLE_HEAD = [
    "d",
    "H",
    "decimal",
    "witness",
]

LISTING_HEAD = [
    "T",
    "q",
    "decimal",
]

AUDIT_HEAD = [
    "d",
    "T",
    "q",
    "status",
    "reason",
]
