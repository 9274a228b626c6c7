#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Tests for the background CSV writer.
"""

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent.parent.parent))

from hesslab.config import EXIT_CONFIG
from hesslab.errors import HesslabError, OutputError
from hesslab.writer import CsvWriter, format_cell, write_csv


class TestCsvWriter:
    """Row output and failure reporting."""

    def test_rows_written(self, tmp_path):
        path = tmp_path / "rows.csv"
        count = write_csv(str(path), ["a", "b"], [(1, 0.5), (2, None), (3, True)])
        assert count == 3
        lines = path.read_text().splitlines()
        assert lines[0] == "a,b"
        assert lines[2] == "2,"
        assert lines[3] == "3,1"

    def test_format_cell(self):
        assert format_cell(None) == ""
        assert format_cell(False) == "0"
        assert format_cell("x") == "x"

    def test_unwritable_path_raises(self, tmp_path):
        with pytest.raises(OutputError) as info:
            write_csv(str(tmp_path), ["a"], [(1,), (2,)])
        assert isinstance(info.value, HesslabError)
        assert info.value.exit_code == EXIT_CONFIG
        assert isinstance(info.value.__cause__, OSError)

    def test_full_queue_does_not_block(self, tmp_path):
        with pytest.raises(OutputError):
            write_csv(str(tmp_path), ["a"], ((i,) for i in range(20000)))

    def test_small_queue_surfaces_failure(self, tmp_path):
        with pytest.raises(OutputError):
            with CsvWriter(str(tmp_path / "missing" / "rows.csv"), ["a"], queue_max=4) as writer:
                writer.submit_many((i,) for i in range(100))

    def test_row_width_checked(self, tmp_path):
        with CsvWriter(str(tmp_path / "rows.csv"), ["a", "b"]) as writer:
            with pytest.raises(OutputError):
                writer.submit((1,))

    def test_submit_after_close(self, tmp_path):
        writer = CsvWriter(str(tmp_path / "rows.csv"), ["a"])
        writer.submit((1,))
        writer.close()
        assert writer.rows_written == 1
        with pytest.raises(OutputError):
            writer.submit((2,))
        writer.close()
