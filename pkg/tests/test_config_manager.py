from fractions import Fraction

import yaml

from core.config_manager import ENV_LOG_LEVEL, ConfigManager


def test_missing_file_uses_defaults(tmp_path):
    path = tmp_path / "config.yaml"
    manager = ConfigManager(str(path))
    assert not path.exists()
    assert manager.get_chain_limit() == 12
    assert manager.get_mazur_bound() == 12
    assert manager.get_max_workers() == 4
    assert manager.get_specialization_probes() == [3, 5, Fraction(7, 2), -3, Fraction(11, 3)]
    assert manager.get_identities_config()['seed'] == 20240601


def test_create_if_missing(tmp_path):
    path = tmp_path / "nested" / "config.yaml"
    ConfigManager(str(path), create_if_missing=True)
    assert path.exists()
    saved = yaml.safe_load(path.read_text(encoding='utf-8'))
    assert saved['symchain']['chain']['limit'] == 12


def test_loaded_values_override_defaults(tmp_path):
    path = tmp_path / "config.yaml"
    path.write_text(yaml.dump({'symchain': {'chain': {'limit': 20},
                                            'logging': {'level': 'debug'}}}), encoding='utf-8')
    manager = ConfigManager(str(path))
    assert manager.get_chain_limit() == 20
    assert manager.get('symchain.chain.mazur_bound') == 12
    assert manager.get('symchain.logging.level') == 'DEBUG'


def test_invalid_values_are_reset(tmp_path):
    path = tmp_path / "config.yaml"
    path.write_text(yaml.dump({'symchain': {
        'logging': {'level': 'LOUD'},
        'chain': {'limit': -3, 'mazur_bound': True, 'specialization_probes': ['1/0']},
        'identities': {'seed': 'abc'},
        'concurrency': 'many',
    }}), encoding='utf-8')
    manager = ConfigManager(str(path))
    assert manager.get('symchain.logging.level') == 'INFO'
    assert manager.get_chain_limit() == 12
    assert manager.get_mazur_bound() == 12
    assert len(manager.get_specialization_probes()) == 5
    assert manager.get('symchain.identities.seed') == 20240601
    assert manager.get_max_workers() == 4


def test_empty_and_broken_files(tmp_path):
    empty = tmp_path / "empty.yaml"
    empty.write_text("", encoding='utf-8')
    assert ConfigManager(str(empty)).get_chain_limit() == 12

    broken = tmp_path / "broken.yaml"
    broken.write_text("symchain: [unclosed", encoding='utf-8')
    assert ConfigManager(str(broken)).get_chain_limit() == 12


def test_environment_overrides_log_level(tmp_path, monkeypatch):
    manager = ConfigManager(str(tmp_path / "config.yaml"))
    monkeypatch.setenv(ENV_LOG_LEVEL, "warning")
    assert manager.get_logging_config()['level'] == 'WARNING'
    monkeypatch.setenv(ENV_LOG_LEVEL, "chatty")
    assert manager.get_logging_config()['level'] == 'INFO'
    monkeypatch.delenv(ENV_LOG_LEVEL)
    assert manager.get_logging_config()['level'] == 'INFO'


def test_set_save_and_reload(tmp_path):
    path = tmp_path / "config.yaml"
    manager = ConfigManager(str(path))
    manager.set('symchain.concurrency.max_workers', 2)
    manager.set('extra.section.value', 'x')
    assert manager.get('extra.section.value') == 'x'
    assert manager.get('no.such.key', 'fallback') == 'fallback'
    manager.save_config()
    manager.reload_config()
    assert manager.get_max_workers() == 2

    manager.reset_to_default()
    manager.reload_config()
    assert manager.get_max_workers() == 4
