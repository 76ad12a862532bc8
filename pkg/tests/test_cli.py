"""
Tests for the CLI Package

Tests configuration loading, command-line overrides, the experiment runners,
CSV output and exit codes.
"""

import csv
import math
from pathlib import Path

import pytest

from src.cli.controller import load_config, parse_config, run, with_overrides
from src.cli.schemas import RunConfig, experiment_columns
from src.cli.writer import metadata_lines
from src.configs.settings import settings
from src.contrib.exceptions import ConfigParseError, ConfigValidationError
from src.contrib.schemas import ExperimentKind
from src.main import main
from src.model.schemas import TWO_PI


SHORT_TIME_SWEEP = """
[experiment]
kind = "time_sweep"

[grids]
time_start = 1e-6
time_stop = 3e-6
time_step = 1e-6
"""


def read_csv(path: Path) -> tuple[list[str], list[str], list[list[float]]]:
    """Split a result file into metadata lines, header and numeric rows."""
    lines = path.read_text(encoding='utf-8').splitlines()
    metadata = [line for line in lines if line.startswith('#')]
    body = [line for line in lines if not line.startswith('#')]
    rows = list(csv.reader(body))
    return metadata, rows[0], [[float(value) for value in row] for row in rows[1:]]


class TestLoadConfig:
    """Tests for reading and validating run configurations."""

    def test_empty_file_uses_defaults(self, write_config):
        """Test an empty file runs the default experiment at the default working point."""
        config = load_config(write_config(''))
        assert config.kind is ExperimentKind.TIME_SWEEP
        assert config.experiment.subtraction_time == 9e-6
        assert config.experiment.threads == settings.DEFAULT_THREADS
        assert config.output.directory == settings.OUTPUT_DIR
        params = config.physical_params()
        assert params.mech_freq == pytest.approx(TWO_PI * 1e9)
        assert params.detuning == pytest.approx(-TWO_PI * 1e9)

    def test_negative_temperature_names_field(self, write_config):
        """Test validation errors name the offending field."""
        with pytest.raises(ConfigValidationError) as info:
            load_config(write_config('[params]\ntemperature = -0.001\n'))
        assert info.value.exit_code == 2
        assert any(error.startswith('params.temperature') for error in info.value.errors)

    def test_unknown_key_rejected(self, write_config):
        """Test unknown keys are reported instead of ignored."""
        with pytest.raises(ConfigValidationError) as info:
            load_config(write_config('[params]\ntemprature = 0.01\n'))
        assert 'params.temprature' in info.value.detail

    def test_unknown_experiment_rejected(self, write_config):
        """Test an unknown experiment kind is rejected."""
        with pytest.raises(ConfigValidationError):
            load_config(write_config('[experiment]\nkind = "fig9"\n'))

    def test_decreasing_temperatures_rejected(self, write_config):
        """Test temperature grids must increase."""
        with pytest.raises(ConfigValidationError):
            load_config(write_config('[grids]\ntemperatures = [0.02, 0.01]\n'))

    def test_reversed_time_window_rejected(self, write_config):
        """Test time_stop may not precede time_start."""
        with pytest.raises(ConfigValidationError):
            load_config(write_config('[grids]\ntime_start = 2e-6\ntime_stop = 1e-6\n'))

    def test_malformed_toml_reports_line(self, write_config):
        """Test TOML syntax errors carry their location."""
        with pytest.raises(ConfigParseError) as info:
            load_config(write_config('[params]\ntemperature = = 1\n'))
        assert info.value.exit_code == 2
        assert info.value.line == 2

    def test_missing_file(self, tmp_path):
        """Test a missing file is a parse error."""
        with pytest.raises(ConfigParseError):
            load_config(tmp_path / 'absent.toml')


class TestRunConfig:
    """Tests for the resolved configuration."""

    def test_steady_red_preset(self):
        """Test steady_red pins the lighter mass and red detuning."""
        params = parse_config({'experiment': {'kind': 'steady_red'}}).physical_params()
        assert params.effective_mass == 5e-15
        assert params.detuning == pytest.approx(TWO_PI * 1e9)

    def test_preset_yields_to_explicit_values(self):
        """Test explicitly configured values win over the preset."""
        config = parse_config({
            'experiment': {'kind': 'steady_red'},
            'params': {'effective_mass': 1e-14},
        })
        params = config.physical_params()
        assert params.effective_mass == 1e-14
        assert params.detuning > 0

    def test_preset_only_applies_to_steady_red(self):
        """Test other experiments keep the blue-detuned defaults."""
        params = parse_config({'experiment': {'kind': 'optimum'}}).physical_params()
        assert params.effective_mass == 5e-12
        assert params.detuning < 0

    def test_default_grids(self):
        """Test the default time and phase-space grids."""
        grids = RunConfig().grids
        times = grids.time_points()
        assert len(times) == 100
        assert times[0] == 0.5e-6
        assert times[-1] == pytest.approx(50e-6)
        axis = grids.delta_axis()
        assert axis.size == 81
        assert axis[0] == -2.0 and axis[-1] == 2.0

    def test_hash_ignores_location_and_threads(self):
        """Test output directory and thread count do not change the file name."""
        first = parse_config({'output': {'directory': 'a'}, 'experiment': {'threads': 1}})
        second = parse_config({'output': {'directory': 'b'}, 'experiment': {'threads': 8}})
        assert first.config_hash() == second.config_hash()
        assert len(first.config_hash()) == 12

    def test_hash_tracks_physics(self):
        """Test different physical parameters give different file names."""
        first = parse_config({'params': {'temperature': 0.01}})
        second = parse_config({'params': {'temperature': 0.02}})
        assert first.config_hash() != second.config_hash()

    def test_output_path(self):
        """Test the file name combines experiment and hash."""
        config = parse_config({'output': {'directory': 'out'}})
        assert config.output_path() == Path('out') / f'time_sweep_{config.config_hash()}.csv'

    def test_overrides(self, tmp_path):
        """Test command-line overrides replace file values and revalidate."""
        config = with_overrides(
            parse_config({'experiment': {'kind': 'optimum'}}),
            out=str(tmp_path),
            threads=3,
            experiment='wigner_grid',
        )
        assert config.kind is ExperimentKind.WIGNER_GRID
        assert config.experiment.threads == 3
        assert config.output.directory == str(tmp_path)

    def test_invalid_override_rejected(self):
        """Test overrides go through the same validation."""
        with pytest.raises(ConfigValidationError):
            with_overrides(RunConfig(), threads=0)

    def test_metadata_is_reproducible(self):
        """Test metadata holds the constants and the resolved parameters."""
        lines = dict(metadata_lines(RunConfig()))
        assert lines['constants'] == 'codata2018'
        assert lines['kappa_convention'] == 'amplitude'
        assert 'param.temperature' in lines
        assert 'derived.g_eff' in lines
        assert metadata_lines(RunConfig()) == metadata_lines(RunConfig())

    @pytest.mark.parametrize('kind', list(ExperimentKind))
    def test_columns(self, kind):
        """Test each experiment has a fixed, duplicate-free column order."""
        columns = experiment_columns(kind, 3)
        assert len(columns) == len(set(columns))
        if kind in (ExperimentKind.TEMP_SWEEP, ExperimentKind.STEADY_RED):
            assert columns[-5:] == ('p0', 'p1', 'p2', 'p3', 'remainder')


class TestRun:
    """Tests for executing experiments."""

    def test_time_sweep(self, write_config, tmp_path):
        """Test a short time sweep writes one row per time."""
        config = with_overrides(load_config(write_config(SHORT_TIME_SWEEP)), out=str(tmp_path / 'out'))
        outcome = run(config)
        assert outcome.exit_code == 0
        metadata, header, rows = read_csv(outcome.path)
        assert tuple(header) == experiment_columns(ExperimentKind.TIME_SWEEP, config.grids.n_max)
        assert [row[0] for row in rows] == pytest.approx([1e-6, 2e-6, 3e-6])
        assert all(0.99 < row[header.index('fidelity')] <= 1.0 for row in rows)
        assert f'# config_hash={config.config_hash()}' in metadata

    def test_deterministic(self, write_config, tmp_path):
        """Test repeated runs produce byte-identical files."""
        config = with_overrides(load_config(write_config(SHORT_TIME_SWEEP)), out=str(tmp_path))
        first = run(config).path.read_bytes()
        second = run(config).path.read_bytes()
        assert first == second

    def test_threads_do_not_change_output(self, write_config, tmp_path):
        """Test the worker count leaves the file unchanged."""
        base = load_config(write_config(SHORT_TIME_SWEEP))
        serial = run(with_overrides(base, out=str(tmp_path / 'serial'), threads=1))
        parallel = run(with_overrides(base, out=str(tmp_path / 'parallel'), threads=3))
        assert serial.path.name == parallel.path.name
        assert serial.path.read_bytes() == parallel.path.read_bytes()

    def test_unstable_exit_code(self, tmp_path):
        """Test unstable parameters exit with code 3 and leave no file."""
        config = parse_config({'params': {'input_power': 0.5}, 'output': {'directory': str(tmp_path)}})
        outcome = run(config)
        assert outcome.exit_code == 3
        assert outcome.path is None
        assert not config.output_path().exists()

    def test_self_check_exit_code(self, monkeypatch, write_config, tmp_path):
        """Test a failed quadrature cross-check exits with code 4 and leaves no file."""
        monkeypatch.setattr(settings, 'QUADRATURE_STEP', 1.0)
        config = with_overrides(load_config(write_config(SHORT_TIME_SWEEP)), out=str(tmp_path))
        outcome = run(config)
        assert outcome.exit_code == 4
        assert not config.output_path().exists()

    def test_failed_run_keeps_earlier_output(self, monkeypatch, write_config, tmp_path):
        """Test a failing rerun leaves the file of an earlier successful run intact."""
        config = with_overrides(load_config(write_config(SHORT_TIME_SWEEP)), out=str(tmp_path))
        first = run(config)
        assert first.exit_code == 0
        written = first.path.read_bytes()

        monkeypatch.setattr(settings, 'QUADRATURE_STEP', 1.0)
        assert run(config).exit_code == 4
        assert first.path.read_bytes() == written

    def test_fidelity_map(self, tmp_path):
        """Test the map covers every (temperature, time) pair, temperature-major."""
        temperatures = [5e-3, 25e-3, 50e-3]
        config = parse_config({
            'experiment': {'kind': 'fidelity_map'},
            'grids': {
                'temperatures': temperatures,
                'time_start': 2e-6,
                'time_stop': 8e-6,
                'time_step': 2e-6,
            },
            'output': {'directory': str(tmp_path)},
        })
        outcome = run(config)
        assert outcome.exit_code == 0
        _, header, rows = read_csv(outcome.path)
        assert header == [
            'temperature', 't', 'omega_m_t', 'fidelity', 'n_eff', 'log_negativity',
        ]
        times = config.grids.time_points()
        assert len(rows) == len(temperatures) * len(times) == 12
        assert [row[0] for row in rows] == [t for t in temperatures for _ in times]
        assert [row[1] for row in rows] == times * len(temperatures)

        fidelity = {(row[0], row[1]): row[3] for row in rows}
        for t in times:
            column = [fidelity[(temperature, t)] for temperature in temperatures]
            assert column[0] > column[1] > column[2]

    def test_wigner_grid(self, tmp_path):
        """Test the Wigner grid is negative at the origin and has 81² rows."""
        config = parse_config({
            'experiment': {'kind': 'wigner_grid'},
            'output': {'directory': str(tmp_path)},
        })
        outcome = run(config)
        assert outcome.exit_code == 0
        _, header, rows = read_csv(outcome.path)
        assert header == ['delta_r', 'delta_i', 'wigner', 'target_wigner']
        assert len(rows) == 81 * 81
        minimum = min(rows, key=lambda row: row[2])
        assert minimum[0] == pytest.approx(0.0, abs=1e-12)
        assert minimum[1] == pytest.approx(0.0, abs=1e-12)
        assert minimum[2] < 0
        assert minimum[3] == pytest.approx(-2 / math.pi)

    def test_temperature_sweep(self, tmp_path):
        """Test a small temperature sweep lists probabilities and a remainder."""
        config = parse_config({
            'experiment': {'kind': 'temp_sweep'},
            'grids': {'temperatures': [5e-3, 50e-3], 'n_max': 3},
            'output': {'directory': str(tmp_path)},
        })
        outcome = run(config)
        assert outcome.exit_code == 0
        _, header, rows = read_csv(outcome.path)
        assert header[-5:] == ['p0', 'p1', 'p2', 'p3', 'remainder']
        assert [row[0] for row in rows] == [5e-3, 50e-3]
        fidelity = header.index('fidelity')
        assert rows[0][fidelity] > rows[1][fidelity]
        for row in rows:
            assert sum(row[-5:]) == pytest.approx(1.0, abs=1e-12)

    def test_steady_red(self, tmp_path):
        """Test the red-detuned steady state runs per temperature."""
        config = parse_config({
            'experiment': {'kind': 'steady_red'},
            'grids': {'temperatures': [50e-3], 'n_max': 2},
            'output': {'directory': str(tmp_path)},
        })
        outcome = run(config)
        assert outcome.exit_code == 0
        metadata, header, rows = read_csv(outcome.path)
        assert tuple(header) == experiment_columns(ExperimentKind.STEADY_RED, 2)
        assert len(rows) == 1
        assert any(line.startswith('# preset=steady_red') for line in metadata)

    def test_optimum(self, tmp_path):
        """Test the optimum experiment writes a single row on the time grid."""
        config = parse_config({
            'experiment': {'kind': 'optimum'},
            'grids': {'time_start': 1e-6, 'time_stop': 10e-6, 'time_step': 1e-6},
            'output': {'directory': str(tmp_path)},
        })
        outcome = run(config)
        assert outcome.exit_code == 0
        _, header, rows = read_csv(outcome.path)
        assert len(rows) == 1
        assert rows[0][header.index('fidelity')] >= 0.995
        assert rows[0][0] in config.grids.time_points()


class TestMain:
    """Tests for the simulate command."""

    def test_success(self, write_config, tmp_path):
        """Test a valid run exits with 0 and writes its file."""
        code = main([str(write_config(SHORT_TIME_SWEEP)), '--out', str(tmp_path / 'cli')])
        assert code == 0
        assert len(list((tmp_path / 'cli').glob('time_sweep_*.csv'))) == 1

    def test_invalid_config(self, write_config, tmp_path):
        """Test an invalid config exits with 2 and writes nothing."""
        code = main([str(write_config('[params]\ntemperature = -1.0\n')), '--out', str(tmp_path / 'cli')])
        assert code == 2
        assert not (tmp_path / 'cli').exists()

    def test_experiment_override(self, write_config, tmp_path):
        """Test --experiment selects the experiment."""
        text = '[grids]\ntemperatures = [0.005]\nn_max = 1\n'
        code = main([str(write_config(text)), '--out', str(tmp_path), '--experiment', 'temp_sweep'])
        assert code == 0
        assert len(list(tmp_path.glob('temp_sweep_*.csv'))) == 1

    def test_unknown_experiment_option(self, write_config):
        """Test argparse rejects unknown experiment names."""
        with pytest.raises(SystemExit) as info:
            main([str(write_config('')), '--experiment', 'fig9'])
        assert info.value.code == 2
