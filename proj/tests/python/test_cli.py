# Copyright (c) 2026 The PopEval Toolkit Authors. All Rights Reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import json
import os
import subprocess

import pytest

CLI = os.environ.get("POPEVAL_CLI")

pytestmark = pytest.mark.skipif(CLI is None, reason="POPEVAL_CLI not set")


def run(*args, cwd=None):
    return subprocess.run([CLI, *args], capture_output=True, text=True, cwd=cwd)


def test_worked_example_summary_line(tmp_path):
    (tmp_path / "gt").mkdir()
    (tmp_path / "det").mkdir()
    (tmp_path / "gt" / "gt_img_1.txt").write_text("0,0,70,0,70,10,0,10,POPEVAL\n")
    (tmp_path / "det" / "res_img_1.txt").write_text(
        "10,0,30,0,30,10,10,10,OP\n30,0,70,0,70,10,30,10,EVAL\n")

    result = run("eval", "--gt", str(tmp_path / "gt"), "--det", str(tmp_path / "det"),
                 "--out", str(tmp_path / "report.json"))
    assert result.returncode == 0
    assert result.stdout.startswith("precision=1.000000 recall=0.857142")
    report = json.loads((tmp_path / "report.json").read_text())
    assert report["per_image"][0]["removed"] == 6.0
    assert report["per_image"][0]["precision"] == 1.0

    # 1-NED on the same fixture: only EVAL clears the IOU gate
    # (edit popeval->eval is 3 of 7), OP contributes a blank hypothesis,
    # so the value is 1 - (3/7 + 1)/2 = 2/7.
    ned = run("eval", "--gt", str(tmp_path / "gt"), "--det", str(tmp_path / "det"),
              "--metric", "1-ned", "--out", str(tmp_path / "ned.json"))
    assert ned.returncode == 0
    assert ned.stdout.strip() == "1-ned=0.285714"


def test_empty_corpus_has_null_aggregate(tmp_path):
    (tmp_path / "gt").mkdir()
    (tmp_path / "det").mkdir()
    result = run("eval", "--gt", str(tmp_path / "gt"), "--det", str(tmp_path / "det"),
                 "--out", str(tmp_path / "report.json"))
    assert result.returncode == 0
    assert result.stdout.startswith("precision=null")
    report = json.loads((tmp_path / "report.json").read_text())
    assert report["aggregate"]["precision"] is None
    assert report["aggregate"]["gt_chars"] == 0
    assert report["per_image"] == []


def test_synth_eval_round_trip(tmp_path):
    fixtures = tmp_path / "fx"
    assert run("synth", "--out", str(fixtures), "--n", "18", "--seed", "7").returncode == 0

    report_path = tmp_path / "report.json"
    result = run("eval", "--gt", str(fixtures / "gt"), "--det", str(fixtures / "det"),
                 "--out", str(report_path))
    assert result.returncode == 0
    assert result.stdout.startswith("precision=")

    report = json.loads(report_path.read_text())
    expected = json.loads((fixtures / "expected.json").read_text())
    reported = {row["image_id"]: row for row in report["per_image"]}
    for row in expected["per_image"]:
        got = reported[row["image_id"]]
        assert got["removed"] == pytest.approx(row["removed"])
        assert got["gt_chars"] == row["gt_chars"]
        assert got["det_chars"] == row["det_chars"]
        assert got["fscore"] == pytest.approx(row["fscore"], abs=2e-6)
    assert report["warnings"] == []


def test_reports_are_byte_identical_across_runs_and_jobs(tmp_path):
    fixtures = tmp_path / "fx"
    run("synth", "--out", str(fixtures), "--n", "12", "--seed", "40")
    outputs = []
    for name, jobs in (("a.json", "1"), ("b.json", "1"), ("c.json", "4")):
        path = tmp_path / name
        result = run("eval", "--gt", str(fixtures / "gt"), "--det", str(fixtures / "det"),
                     "--out", str(path), "--jobs", jobs)
        assert result.returncode == 0
        outputs.append(path.read_bytes())
    assert outputs[0] == outputs[1] == outputs[2]


def test_shuffled_file_lines_do_not_change_scores(tmp_path):
    import random

    fixtures = tmp_path / "fx"
    run("synth", "--out", str(fixtures), "--n", "12", "--seed", "13")
    result = run("eval", "--gt", str(fixtures / "gt"), "--det", str(fixtures / "det"),
                 "--out", str(tmp_path / "before.json"))
    assert result.returncode == 0

    rng = random.Random(99)
    for directory in (fixtures / "gt", fixtures / "det"):
        for file in directory.iterdir():
            lines = file.read_text().splitlines(keepends=True)
            rng.shuffle(lines)
            file.write_text("".join(lines))
    result = run("eval", "--gt", str(fixtures / "gt"), "--det", str(fixtures / "det"),
                 "--out", str(tmp_path / "after.json"))
    assert result.returncode == 0
    assert (tmp_path / "before.json").read_bytes() == (tmp_path / "after.json").read_bytes()


def test_metric_selection_and_summary_lines(tmp_path):
    fixtures = tmp_path / "fx"
    run("synth", "--out", str(fixtures), "--n", "9", "--seed", "2")
    for metric, prefix in (
        ("popeval", "precision="),
        ("iou", "precision="),
        ("exact", "precision="),
        ("1-ned", "1-ned="),
    ):
        result = run("eval", "--gt", str(fixtures / "gt"), "--det", str(fixtures / "det"),
                     "--metric", metric, "--out", str(tmp_path / f"{metric}.json"))
        assert result.returncode == 0, result.stderr
        assert result.stdout.startswith(prefix)


def test_analyze_and_compare(tmp_path):
    fixtures = tmp_path / "fx"
    run("synth", "--out", str(fixtures), "--n", "9", "--seed", "2")

    analyze = run("analyze", "--gt", str(fixtures / "gt"), "--det", str(fixtures / "det"),
                  "--out", str(tmp_path / "analysis.json"))
    assert analyze.returncode == 0
    doc = json.loads((tmp_path / "analysis.json").read_text())
    assert 0.0 <= doc["analysis"]["split_fraction"] <= 1.0
    assert 0.0 <= doc["analysis"]["permutation_fraction"] <= 1.0

    human = tmp_path / "human.csv"
    human.write_text("".join(f"img_{i},{1 + i % 5}\n" for i in range(1, 10)))
    compare = run("compare", "--gt", str(fixtures / "gt"), "--det", str(fixtures / "det"),
                  "--human", str(human), "--out", str(tmp_path / "compare.json"))
    assert compare.returncode == 0, compare.stderr
    doc = json.loads((tmp_path / "compare.json").read_text())
    assert set(doc["correlation"]) == {"popeval", "exact", "1-ned"}
    for value in doc["correlation"].values():
        assert -1.0 <= value <= 1.0


def test_exit_codes(tmp_path):
    fixtures = tmp_path / "fx"
    run("synth", "--out", str(fixtures), "--n", "2", "--seed", "1")

    assert run("eval", "--gt", str(tmp_path / "missing"), "--det",
               str(fixtures / "det")).returncode == 2
    assert run("eval", "--gt", str(fixtures / "gt"), "--det", str(fixtures / "det"),
               "--metric", "nope").returncode == 1
    assert run("synth", "--out", str(tmp_path / "x"), "--n", "0").returncode == 1

    bad = tmp_path / "bad"
    (bad / "gt").mkdir(parents=True)
    (bad / "det").mkdir()
    (bad / "gt" / "gt_img_1.txt").write_text("0,0,10,0,oops,10,0,10,w\n")
    result = run("eval", "--gt", str(bad / "gt"), "--det", str(bad / "det"))
    assert result.returncode == 2
    assert "gt_img_1.txt:1" in result.stderr


def test_empty_human_scores_are_an_alignment_error(tmp_path):
    fixtures = tmp_path / "fx"
    run("synth", "--out", str(fixtures), "--n", "3", "--seed", "6")
    empty = tmp_path / "human.csv"
    empty.write_text("")
    result = run("compare", "--gt", str(fixtures / "gt"), "--det", str(fixtures / "det"),
                 "--human", str(empty), "--out", str(tmp_path / "cmp.json"))
    assert result.returncode == 2
    assert "img_" in result.stderr


def test_missing_detection_file_warns_and_scores_zero(tmp_path):
    corpus = tmp_path / "c"
    (corpus / "gt").mkdir(parents=True)
    (corpus / "det").mkdir()
    (corpus / "gt" / "gt_img_1.txt").write_text("0,0,10,0,10,10,0,10,abc\n")
    result = run("eval", "--gt", str(corpus / "gt"), "--det", str(corpus / "det"),
                 "--out", str(tmp_path / "r.json"))
    assert result.returncode == 0
    assert "warning" in result.stderr
    doc = json.loads((tmp_path / "r.json").read_text())
    assert doc["aggregate"]["recall"] == 0.0
