"""
报告结构与报告输出服务测试
"""

import json
import math
import shutil
import sys
import tempfile
import unittest
from pathlib import Path

import pandas as pd

# 添加 src 目录到Python路径
sys.path.insert(0, str(Path(__file__).resolve().parent.parent.parent / "src"))

from antithetic_hmc.services.core.exceptions import ReportError
from antithetic_hmc.services.business.experiment.report import (
    AlgorithmSummary,
    CellResult,
    RunReport,
    best_algorithms,
)
from antithetic_hmc.services.infrastructure.report_service import (
    ReportService,
    runs_frame,
    runs_path,
    summary_frame,
)


def make_report() -> RunReport:
    cells = [
        CellResult("hmc", 1, m_ess=110.0, seconds=2.0, m_ess_per_s=55.0, acceptance=0.8, step_size=0.1),
        CellResult("hmc", 0, m_ess=90.0, seconds=2.0, m_ess_per_s=45.0, acceptance=0.7, step_size=0.1),
        CellResult("a-hmc", 0, m_ess=math.inf, m_ess_original=100.0, seconds=4.0, m_ess_per_s=math.inf,
                   acceptance=0.75, rho=-1.0, degenerate_rho=True, step_size=0.1),
        CellResult("a-hmc", 1, m_ess=300.0, m_ess_original=100.0, seconds=4.0, m_ess_per_s=75.0,
                   acceptance=0.75, rho=-0.5, step_size=0.1),
        CellResult("rmhmc", 0, error="FactorizationError: 矩阵 'hessian' 无效"),
    ]
    return RunReport(
        experiment="unit", dataset="toy", model="blr", dimension=3, n_observations=50,
        master_seed=0, n_repeats=2, workers=2, algorithms=["hmc", "a-hmc", "rmhmc"],
        cells=cells, settings={"n_samples": 100},
    )


class ReportStructureTest(unittest.TestCase):
    """报告结构测试"""

    def test_cells_sorted_by_repeat(self):
        self.assertEqual([c.repeat for c in make_report().cells_for("hmc")], [0, 1])

    def test_summary_means(self):
        summaries = {s.algorithm: s for s in make_report().summaries()}
        self.assertAlmostEqual(summaries["hmc"].m_ess, 100.0)
        self.assertAlmostEqual(summaries["hmc"].acceptance, 0.75)
        self.assertEqual(summaries["a-hmc"].m_ess, math.inf, "含 +inf 哨兵时均值为 +inf")
        self.assertAlmostEqual(summaries["a-hmc"].rho, -0.75)
        self.assertEqual((summaries["rmhmc"].n_runs, summaries["rmhmc"].n_failed), (0, 1))
        self.assertIsNone(summaries["rmhmc"].m_ess)

    def test_failed_cells_counted(self):
        report = make_report()
        self.assertEqual(report.n_failed, 1)
        self.assertFalse(report.cells_for("rmhmc")[0].ok)

    def test_best_algorithms(self):
        summaries = [
            AlgorithmSummary("hmc", 1, 0, 100.0, 1.0, 100.0, 0.8, None, 0.1),
            AlgorithmSummary("a-hmc", 1, 0, 300.0, 2.0, 150.0, 0.8, -0.5, 0.1),
            AlgorithmSummary("rmhmc", 0, 1, None, None, None, None, None, None),
        ]
        self.assertEqual(best_algorithms(summaries), {"m_ess": "a-hmc", "seconds": "hmc", "m_ess_per_s": "a-hmc"})
        self.assertEqual(best_algorithms([summaries[2]]), {"m_ess": None, "seconds": None, "m_ess_per_s": None})

    def test_non_finite_values_become_null(self):
        data = make_report().to_dict()
        runs = data["algorithms"][1]["runs"]
        self.assertIsNone(runs[0]["m_ess"])
        self.assertTrue(runs[0]["degenerate_rho"])
        json.dumps(data, allow_nan=False)

    def test_canonical_drops_timing(self):
        data = make_report().to_dict(canonical=True)
        self.assertNotIn("workers", data)
        self.assertNotIn("seconds", data["best"])
        summary = data["algorithms"][0]["summary"]
        run = data["algorithms"][0]["runs"][0]
        for key in ("seconds", "m_ess_per_s"):
            self.assertNotIn(key, summary)
            self.assertNotIn(key, run)
        self.assertIn("m_ess", run)


class ReportServiceTest(unittest.TestCase):
    """报告输出服务测试"""

    def setUp(self):
        self.temp_dir = Path(tempfile.mkdtemp())
        self.service = ReportService()
        self.assertTrue(self.service.initialize())

    def tearDown(self):
        shutil.rmtree(self.temp_dir, ignore_errors=True)

    def test_json_report(self):
        path = self.service.emit_report(make_report(), self.temp_dir / "out" / "report.json")
        data = json.loads(path.read_text(encoding="utf-8"))
        self.assertEqual(data["dataset"], "toy")
        self.assertEqual([a["summary"]["algorithm"] for a in data["algorithms"]], ["hmc", "a-hmc", "rmhmc"])
        self.assertTrue(runs_path(path).is_file(), "应同时写出逐次运行的长表")

    def test_csv_report(self):
        path = self.service.emit_report(make_report(), self.temp_dir / "report.csv", fmt="csv")
        frame = pd.read_csv(path)
        self.assertEqual(list(frame["algorithm"]), ["hmc", "a-hmc", "rmhmc"])
        self.assertEqual(frame.loc[0, "mESS"], 100.0)
        self.assertEqual(frame.loc[0, "mESS_per_s"], 50.0)
        runs = pd.read_csv(runs_path(path))
        self.assertEqual(len(runs), 5)

    def test_canonical_csv_has_no_timing_columns(self):
        report = make_report()
        self.assertNotIn("t_seconds", summary_frame(report, canonical=True).columns)
        self.assertNotIn("mESS_per_s", runs_frame(report, canonical=True).columns)
        self.assertIn("t_seconds", summary_frame(report).columns)

    def test_canonical_json_independent_of_workers(self):
        a = make_report()
        b = make_report()
        b.workers = 8
        self.assertEqual(self.service.render_json(a, canonical=True), self.service.render_json(b, canonical=True))

    def test_unknown_format(self):
        with self.assertRaises(ReportError):
            self.service.emit_report(make_report(), self.temp_dir / "r.xml", fmt="xml")

    def test_unwritable_path(self):
        blocker = self.temp_dir / "file"
        blocker.write_text("x", encoding="utf-8")
        with self.assertRaises(ReportError):
            self.service.emit_report(make_report(), blocker / "report.json")

    def test_runs_path(self):
        self.assertEqual(runs_path("results/report.json"), Path("results/report.runs.csv"))


if __name__ == "__main__":
    unittest.main()
