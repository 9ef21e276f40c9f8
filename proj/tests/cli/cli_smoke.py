"""End-to-end CLI checks: train, evaluate, aggregate, plot, gradcheck, errors."""
import os
import shutil
import subprocess
import sys
import xml.etree.ElementTree as ET

CHAC = sys.argv[1]
WORK = sys.argv[2]

failures = []


def check(cond, what):
    print(("ok   " if cond else "FAIL ") + what)
    if not cond:
        failures.append(what)


def run(*args):
    return subprocess.run([CHAC, *args], capture_output=True, text=True)


shutil.rmtree(WORK, ignore_errors=True)
os.makedirs(WORK)
cfg = os.path.join(WORK, "tiny.txt")
with open(cfg, "w") as f:
    f.write(
        "env = PointReacher2D\nlayers = 2\nhorizon = 5\n"
        "eta = 0, 0.5, 0.75, 1\nactor_critic_hidden = 16\n"
        "forward_model_hidden = 16\nbatch_size = 16\nupdates_per_round = 1\n"
        "episodes = 4\ntest_every = 2\ntest_batch_size = 2\nseeds = 0, 1\n"
        f"output_dir = {WORK}/out\n"
    )

r = run("train", "--config", cfg)
check(r.returncode == 0, "train exits 0")
files = r.stdout.split()
check(len(files) == 8, "train reports one metrics file per (eta, seed)")
with open(files[0]) as f:
    lines = f.read().splitlines()
check(lines[0].startswith("seed,episode,success_rate,critic_loss_0"), "metrics header")
check(len(lines) == 3, "one row per test batch")

r = run("evaluate", "--checkpoint", f"{WORK}/out/eta0.5_seed0", "--episodes", "3")
check(r.returncode == 0 and r.stdout.startswith("success_rate "), "evaluate prints a rate")
r = run("evaluate", "--checkpoint", f"{WORK}/out/eta0.5_seed0", "--episodes", "0")
check(r.returncode != 0 and "error:" in r.stderr, "evaluate with zero episodes fails")

agg = os.path.join(WORK, "curves.csv")
r = run("aggregate", *files, "--out", agg)
check(r.returncode == 0, "aggregate exits 0")
with open(agg) as f:
    rows = f.read().splitlines()
check(rows[0] == "label,episode,seeds,success_rate_mean,success_rate_std", "curves header")
check(len(rows) == 1 + 4 * 2, "one curve row per label and episode")
check(all(r.split(",")[2] == "2" for r in rows[1:]), "two seeds per point")

svg = os.path.join(WORK, "curves.svg")
r = run("plot", agg, "--out", svg, "--smooth", "2", "--title", "tiny & fast")
check(r.returncode == 0, "plot exits 0")
try:
    root = ET.parse(svg).getroot()
    ns = "{http://www.w3.org/2000/svg}"
    check(root.tag == ns + "svg", "SVG root element")
    legend = [g for g in root.iter(ns + "g") if g.get("class") == "legend-entry"]
    check(len(legend) == 4, "four legend entries")
    texts = [t.text for t in root.iter(ns + "text")]
    check("episodes" in texts and "success rate" in texts, "axis labels")
except ET.ParseError as e:
    check(False, f"SVG parses as XML ({e})")

r = run("gradcheck", "--networks", "10")
check(r.returncode == 0 and "max_relative_error" in r.stdout, "gradcheck passes")

bad = os.path.join(WORK, "bad.txt")
with open(bad, "w") as f:
    f.write("env = PointReacher2D\nbogus_key = 3\n")
r = run("train", "--config", bad)
check(r.returncode != 0 and "bogus_key" in r.stderr, "unknown key names the key")
check(len(r.stderr.strip().splitlines()) == 1, "one-line reason")

r = run("aggregate", os.path.join(WORK, "missing.csv"), "--out", agg)
check(r.returncode != 0, "aggregate of a missing file fails")

sys.exit(1 if failures else 0)
