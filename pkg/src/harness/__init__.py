# Evaluation harness: signal files, metrics, sweeps and the self-test suite
from src.harness.metrics import format_psnr, mse, psnr, psnr_from_mse
from src.harness.selftest import CheckResult, check_names, run_selftest, selftest_check
from src.harness.signal_file import SIGNAL_MAGIC, SignalFile, read_signal, write_signal
from src.harness.sweep import CSV_FIELDS, SweepRow, SweepSpec, run_sweep, write_csv

__all__ = [
    'CSV_FIELDS',
    'CheckResult',
    'SIGNAL_MAGIC',
    'SignalFile',
    'SweepRow',
    'SweepSpec',
    'check_names',
    'format_psnr',
    'mse',
    'psnr',
    'psnr_from_mse',
    'read_signal',
    'run_selftest',
    'run_sweep',
    'selftest_check',
    'write_csv',
    'write_signal',
]
