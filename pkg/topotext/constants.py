DEFAULT_MAX_DIM = 2
DEFAULT_LANDSCAPE_LEVELS = 4
DEFAULT_GAP_FACTOR = 2.0
DEFAULT_BOTH_THRESHOLD = 0.65
DEFAULT_OVERSAMPLES = 10
DEFAULT_POWER_ITERATIONS = 4
DEFAULT_RESOLUTION = 10
DEFAULT_OVERLAP = 0.3
DEFAULT_SEED = 0
DEFAULT_TOP_TERMS = 10

# Lower bounds the randomized SVD never goes under.
MIN_OVERSAMPLES = 5
MIN_POWER_ITERATIONS = 4

ZWNJ = "\u200c"
UNLABELED = "unlabeled"
BOTH = "Both"

DEFAULT_CORPUS_SOURCE_HEADERS = {
    "Accept": "text/plain",
    "User-Agent": "topotext",
}

FIGURE_SIZE = (8.0, 5.0)
SVG_HASH_SALT = "topotext"
