import io
import sys
from contextlib import redirect_stdout

import pytest

from bishape.cli import main


def run_cli(argv):
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = main(argv)
    return code, buf.getvalue()


@pytest.fixture
def points3(tmp_path):
    f = tmp_path / "pts.txt"
    f.write_text("1 2\n2 3\n3 5\n")
    return str(f)


def test_precompute_and_run_mpe(tmp_path, points3):
    pack = tmp_path / "pack.txt"
    code, out = run_cli(
        ["precompute", "--task", "mpe-distinct", "--field", "7", "--points", points3,
         "--d", "2", "--out", str(pack)]
    )
    assert code == 0
    assert "balanced: true" in out
    assert "aggregate" in out

    fin = tmp_path / "f.txt"
    fin.write_text("ydeg 1\n1 0 1\n0 1\n")  # x + y
    res = tmp_path / "res.txt"
    code, out = run_cli(["run", "--pack", str(pack), "--in", str(fin), "--out", str(res), "--verify"])
    assert code == 0
    assert res.read_text() == "3 5 1\n"
    assert "verify: PASS" in out


def test_precompute_valency_violation_exit2(tmp_path):
    pts = tmp_path / "bad.txt"
    pts.write_text("0 0\n0 1\n")
    code, _ = run_cli(
        ["precompute", "--task", "mpe-distinct", "--field", "7", "--points", str(pts), "--d", "2"]
    )
    assert code == 2


def test_run_degree_violation_exit3(tmp_path, points3):
    pack = tmp_path / "pack.txt"
    run_cli(["precompute", "--task", "mpe-distinct", "--field", "7", "--points", points3,
             "--d", "2", "--out", str(pack)])
    fin = tmp_path / "f.txt"
    fin.write_text("ydeg 2\n-1\n-1\n0 1\n")  # y^2: deg_y = 2 >= d
    code, _ = run_cli(["run", "--pack", str(pack), "--in", str(fin)])
    assert code == 3


def test_missing_file_exit4(tmp_path):
    code, _ = run_cli(["run", "--pack", str(tmp_path / "nope.txt"), "--in", str(tmp_path / "nope2")])
    assert code == 4


def test_modcomp_cycle(tmp_path):
    mp = tmp_path / "ma.txt"
    mp.write_text("2 0 0 1\n1 1 1\n")  # M = x^2, A = x + 1
    pack = tmp_path / "pack.txt"
    code, out = run_cli(
        ["precompute", "--task", "modcomp", "--field", "7", "--modpair", str(mp),
         "--d", "3", "--out", str(pack)]
    )
    assert code == 0
    fin = tmp_path / "f.txt"
    fin.write_text("ydeg 2\n-1\n-1\n0 1\n")  # y^2
    code, out = run_cli(["run", "--pack", str(pack), "--in", str(fin), "--verify"])
    assert code == 0
    assert out.splitlines()[0] == "1 2"
    assert "verify: PASS" in out


def test_interpolate_cycle(tmp_path):
    pts = tmp_path / "pts.txt"
    pts.write_text("0 0\n1 1\n")
    pack = tmp_path / "pack.txt"
    code, out = run_cli(
        ["precompute", "--task", "interpolate", "--field", "7", "--points", str(pts),
         "--d", "1", "--out", str(pack)]
    )
    assert code == 0
    gin = tmp_path / "gamma.txt"
    gin.write_text("1 2\n")
    code, out = run_cli(["run", "--pack", str(pack), "--in", str(gin), "--verify"])
    assert code == 0
    assert "verify: PASS" in out
    assert out.startswith("ydeg 0")


def test_shear_cycle_and_verify_pack(tmp_path):
    pts = tmp_path / "pts.txt"
    pts.write_text("0 0\n0 1\n")
    pack = tmp_path / "pack.txt"
    code, _ = run_cli(
        ["precompute", "--task", "mpe-shear", "--field", "7", "--points", str(pts),
         "--d", "3", "--out", str(pack)]
    )
    assert code == 0
    assert "ext" in pack.read_text().splitlines()[1]
    fin = tmp_path / "f.txt"
    fin.write_text("ydeg 1\n-1\n0 1\n")  # y
    code, out = run_cli(["run", "--pack", str(pack), "--in", str(fin), "--verify"])
    assert code == 0
    assert out.splitlines()[0] == "0 1"
    code, out = run_cli(["verify-pack", "--pack", str(pack)])
    assert code == 0
    assert "pack: OK" in out


def test_pack_byte_identical_reruns(tmp_path, points3):
    p1, p2 = tmp_path / "p1.txt", tmp_path / "p2.txt"
    for out in (p1, p2):
        run_cli(["precompute", "--task", "mpe-distinct", "--field", "7", "--points", points3,
                 "--d", "2", "--out", str(out)])
    assert p1.read_bytes() == p2.read_bytes()


def test_balance_stats_deterministic(tmp_path):
    argv = ["balance-stats", "--mode", "points", "--n", "8", "--field", "65537",
            "--d", "3", "--trials", "5", "--seed", "42"]
    c1, out1 = run_cli(argv + ["--out", str(tmp_path / "s1.txt")])
    c2, out2 = run_cli(argv + ["--out", str(tmp_path / "s2.txt")])
    assert c1 == c2 == 0
    assert (tmp_path / "s1.txt").read_bytes() == (tmp_path / "s2.txt").read_bytes()
    assert "prng: philox4x64" in out1
    assert "balanced: 5/5" in out1


def test_balance_stats_empty():
    code, out = run_cli(["balance-stats", "--mode", "modcomp", "--n", "4", "--field", "97",
                         "--d", "2", "--trials", "0", "--seed", "1"])
    assert code == 0
    assert "balanced: 0/0" in out


def test_bench_single_size_and_digest_determinism():
    argv = ["bench", "--task", "mpe-distinct", "--sizes", "64", "--seed", "7", "--field", "65537"]
    c1, out1 = run_cli(argv)
    c2, out2 = run_cli(argv)
    assert c1 == c2 == 0
    dig1 = out1.splitlines()[-1].split()[-1]
    dig2 = out2.splitlines()[-1].split()[-1]
    assert dig1 == dig2


def test_transpose_flag(tmp_path):
    # points with repeated x but distinct y: transposing makes distinct-x valid
    pts = tmp_path / "pts.txt"
    pts.write_text("0 1\n0 2\n")
    pack = tmp_path / "pack.txt"
    code, _ = run_cli(
        ["precompute", "--task", "mpe-distinct", "--field", "7", "--points", str(pts),
         "--d", "2", "--transpose", "--out", str(pack)]
    )
    assert code == 0
    # f = x: transposed f = y; evaluations of x at (0,1),(0,2) are 0,0
    fin = tmp_path / "f.txt"
    fin.write_text("ydeg 0\n1 0 1\n")  # x
    code, out = run_cli(["run", "--pack", str(pack), "--in", str(fin), "--transpose"])
    assert code == 0
    assert out.splitlines()[0] == "0 0"
    # modcomp rejects the flag
    mp = tmp_path / "ma.txt"
    mp.write_text("2 0 0 1\n1 1 1\n")
    code, _ = run_cli(["precompute", "--task", "modcomp", "--field", "7", "--modpair", str(mp),
                       "--d", "2", "--transpose"])
    assert code == 2
