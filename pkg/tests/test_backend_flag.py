import os
import subprocess
import sys


def test_env_flag_forces_numpy_fallback():
    env = dict(os.environ, TORIC_EMBED_DISABLE_NUMBA="1")
    code = (
        "from toric_embed import _kernels, verify;"
        "from toric_embed.fixtures import load_fixture;"
        "fx = load_fixture('p11222');"
        "r = verify.nondegeneracy_scan(fx.fan, fx.hypersurface, (5,));"
        "print(_kernels.BACKEND, _kernels.HAVE_NUMBA, verify.h1_dims(fx.delta).h1_poly, r.counts[5])"
    )
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["numpy", "False", "83", "0"]
