from .props import run_property_suite, write_worst_rows, SYMMETRIC_CHECKS

__all__ = ["run_property_suite", "write_worst_rows", "SYMMETRIC_CHECKS"]
