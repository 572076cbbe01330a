"""Global configuration constants shared by graphs, provers and the harness."""

# Size of the vertex-label alphabet: labels are integers in [0, LAMBDA).
LAMBDA = 2

# Vertex weights for optimization instances live in [-MAXW, +MAXW].
MAXW = 8

# Identifiers are distinct integers in [1, n**ID_EXPONENT].
ID_EXPONENT = 2

# Name of the pseudo-random generator the harness uses.  All instance
# streams are produced by ``random.Random(seed)`` (Mersenne Twister), so a
# port that implements the same generator reproduces them bit for bit.
RNG_NAME = "python-mt19937"
