from fractions import Fraction

from tileroute.envelope import AffineFn1
from tileroute.model import INF, GeneralCosts, TileGrid


def two_tile_costs() -> GeneralCosts:
    """Two tiles side by side: [0,4]x[0,1] and [4,7]x[0,1], everything else INF."""
    grid = TileGrid((0, 4, 7), (0, 1), 1)
    horiz = [[[INF] for _ in range(3)] for _ in range(4)]
    vert = [[[INF] for _ in range(3)] for _ in range(4)]
    via = [[[] for _ in range(3)] for _ in range(4)]
    horiz[1][1] = [2]
    vert[1][1] = [20]
    horiz[2][1] = [1]
    vert[2][1] = [10]
    return GeneralCosts(grid, horiz, vert, via)


def through(p, q):
    (x1, y1), (x2, y2) = [(Fraction(str(a)), Fraction(str(b))) for a, b in (p, q)]
    s = (y2 - y1) / (x2 - x1)
    return AffineFn1(s, y1 - s * x1)


def five_line_scenario():
    fs = [through((3.8, 4.5), (2, 0)), through((12, 2.6), (2, 3.6)), through((12, 2.1), (2, 4.3)),
          through((12, 1.5), (9, 4.5)), through((12, 0.4), (11, 4.5))]
    g = through((12, 1.1), (2, 4.2))
    return fs, g
