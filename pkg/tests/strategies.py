from hypothesis import strategies as st

from cyclowin.padic_rings import PrecisionCtx, ScriptSeries, SigmaSeries

SMALL = PrecisionCtx(p=3, N=3, M=8, r=1)


def coordinates(ctx=SMALL):
    return st.lists(st.integers(0, ctx.modulus - 1), min_size=0, max_size=ctx.M)


def sigma_series(ctx=SMALL):
    return coordinates(ctx).map(lambda coords: SigmaSeries(ctx, coords))


def script_series(ctx=SMALL):
    return coordinates(ctx).map(lambda coords: ScriptSeries(ctx, coords))


def sigma_units(ctx=SMALL):
    return sigma_series(ctx).filter(lambda x: x.is_unit())


def chis(ctx=SMALL):
    """Values of the cyclotomic character: integers prime to p."""
    return st.integers(1, ctx.p ** (ctx.N + 2)).filter(lambda chi: chi % ctx.p)


def chis_near_one(ctx=SMALL, s=1):
    return st.integers(0, ctx.p**ctx.N).map(lambda k: 1 + ctx.p**s * k)
