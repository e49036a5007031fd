"""Identifiers that tensor and function names may not use.

The generated contraction functions must parse in Python, MATLAB and Julia,
so a name is rejected if it is a keyword in any of the three dialects, or if
it collides with an identifier the generated code itself introduces (the
function arguments, the contractor, and the helpers used to build identity
tensors).  The lists are frozen literals rather than derived from
``keyword.kwlist`` so that the accepted-name contract cannot drift with the
interpreter running the compiler.
"""

PYTHON_KEYWORDS = (
    "False", "None", "True", "and", "as", "assert", "async", "await",
    "break", "class", "continue", "def", "del", "elif", "else", "except",
    "finally", "for", "from", "global", "if", "import", "in", "is",
    "lambda", "nonlocal", "not", "or", "pass", "raise", "return", "try",
    "while", "with", "yield",
)

MATLAB_KEYWORDS = (
    "break", "case", "catch", "classdef", "continue", "else", "elseif",
    "end", "for", "function", "global", "if", "otherwise", "parfor",
    "persistent", "return", "spmd", "switch", "try", "while",
)

JULIA_KEYWORDS = (
    "baremodule", "begin", "break", "catch", "const", "continue", "do",
    "else", "elseif", "end", "export", "false", "finally", "for",
    "function", "global", "if", "import", "let", "local", "macro",
    "module", "quote", "return", "struct", "true", "try", "using", "while",
)

# Introduced by the emitted function bodies themselves.
GENERATED_CODE_NAMES = (
    "ncon", "tensors", "which_net", "which_env", "np", "numpy", "eye",
)

RESERVED_WORDS = frozenset(
    PYTHON_KEYWORDS + MATLAB_KEYWORDS + JULIA_KEYWORDS + GENERATED_CODE_NAMES
)
