import srsly

from typer.testing import CliRunner

from stablecoin_redemption_controller.cli import app

runner = CliRunner()

SMALL_STUDY = '''
[study]
trials = 1
steps = 8
scenarios = ["default", "stress"]
controllers = ["dai", "rai"]
'''


def test_run_writes_the_trace(tmp_path):
    result = runner.invoke(app, ['run', '--controller', 'rai', '--scenario', 'stress', '--steps', '10', '--arb', '0', '--out', str(tmp_path), '--quiet'])
    assert result.exit_code == 0, result.output
    csv_path = tmp_path / 'stress_rai_arb0_seed0.csv'
    assert csv_path.is_file()
    assert len(csv_path.read_text().splitlines()) == 11
    header = srsly.read_json(tmp_path / 'stress_rai_arb0_seed0.json')
    assert header['controller'] == 'rai'
    assert header['scenario']['steps'] == 10


def test_run_accepts_short_scenario_names(tmp_path):
    result = runner.invoke(app, ['run', '--controller', 'dai', '--scenario', 'crisis', '--steps', '5', '--out', str(tmp_path), '--quiet'])
    assert result.exit_code == 0, result.output
    assert (tmp_path / 'vault_crisis_dai_arb50_seed0.csv').is_file()


def test_mc_writes_the_summary(tmp_path):
    config = tmp_path / 'small.cfg'
    config.write_text(SMALL_STUDY)
    result = runner.invoke(app, ['mc', '--config', str(config), '--arb', '0', '--out', str(tmp_path), '--traces', '--quiet'])
    assert result.exit_code == 0, result.output
    summary = srsly.read_json(tmp_path / 'summary.json')
    assert len(summary['cells']) == 4
    assert summary['study']['arbitrage_levels'] == [0.0]
    assert set(summary['pooled']) == {'Avg.', 'Median', 'Std. Dev.'}
    assert len(list((tmp_path / 'traces').glob('*.csv'))) == 4


def test_crisis_writes_the_rows(tmp_path):
    config = tmp_path / 'small.cfg'
    config.write_text(SMALL_STUDY)
    result = runner.invoke(app, ['crisis', '--config', str(config), '--steps', '25', '--out', str(tmp_path), '--quiet'])
    assert result.exit_code == 0, result.output
    rows = srsly.read_json(tmp_path / 'crisis.json')
    assert set(rows) == {'dai', 'rai'}
    assert set(rows['dai']) == {'mean_min_gamma', 'median_min_gamma', 'share_below_min_ratio', 'mean_p_mad'}


def test_configuration_errors_exit_with_code_2(tmp_path):
    result = runner.invoke(app, ['run', '--scenario', 'bank_run', '--out', str(tmp_path), '--quiet'])
    assert result.exit_code == 2
    result = runner.invoke(app, ['run', '--controller', 'dai', '--kp', '-1', '--out', str(tmp_path), '--quiet'])
    assert result.exit_code == 2
    result = runner.invoke(app, ['mc', '--config', str(tmp_path / 'missing.cfg'), '--quiet'])
    assert result.exit_code == 2
