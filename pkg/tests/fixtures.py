"""Problem texts shared by the tests and scripts."""

from sgr.problem import parse_problem

WALK_F1 = "group free 1\ndim 1\nentry 1 1 : g1 + g1^-1\n"
WALK_F2 = "group free 2\ndim 1\nentry 1 1 : g1 + g1^-1 + g2 + g2^-1\n"
WALK_Z2 = "group abelian 2\ndim 1\nentry 1 1 : g1 + g1^-1 + g2 + g2^-1\n"
WALK_Z1 = "group abelian 1\ndim 1\nentry 1 1 : g1 + g1^-1\n"
UNIT = "group free 1\ndim 1\nentry 1 1 : 1\n"

# r in {1, 2}, N in {1, 2}; self-adjoint and not, words of mixed length
SUITE = {
    "walk_f1": WALK_F1,
    "walk_f2": WALK_F2,
    "lopsided_f1": "group free 1\ndim 1\nentry 1 1 : 2*g1 + g1^-2 + 1/2\n",
    "twisted_f2": "group free 2\ndim 1\nentry 1 1 : g1*g2 + g2^-1 - 1/3*g1^-1\n",
    "block_f1": (
        "group free 1\ndim 2\n"
        "entry 1 1 : g1\nentry 1 2 : 1\n"
        "entry 2 1 : g1^-1\nentry 2 2 : -g1^-1 + 2/3\n"
    ),
    "block_f2": (
        "group free 2\ndim 2\n"
        "entry 1 1 : g1 + g1^-1\nentry 1 2 : g2\n"
        "entry 2 1 : g2^-1\nentry 2 2 : 1/2*g1*g2^-1 - g2*g1^-1\n"
    ),
    "hermitian_f2": (
        "group free 2\ndim 2\n"
        "entry 1 1 : g1 + g1^-1\nentry 1 2 : g2 + g1^-1\n"
        "entry 2 1 : g2^-1 + g1\nentry 2 2 : g2 + g2^-1 - 1\n"
    ),
}


def problem(text):
    return parse_problem(text)


def matrix(text):
    return parse_problem(text).matrix()
