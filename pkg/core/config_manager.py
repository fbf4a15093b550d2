"""
配置管理器
负责加载、验证和管理 symchain 的配置
"""
import copy
import logging
import os
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List

import yaml

logger = logging.getLogger(__name__)

LOG_LEVELS = ('DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL')
ENV_LOG_LEVEL = 'SYMCHAIN_LOG_LEVEL'


class ConfigManager:
    """配置管理器"""

    def __init__(self, config_path: str = "config.yaml", create_if_missing: bool = False):
        self.config_path = Path(config_path)
        self.create_if_missing = create_if_missing
        self.config: Dict[str, Any] = {}
        self.default_config = self._get_default_config()

        # 加载配置
        self.load_config()

        # 验证配置
        self.validate_config()

    def _get_default_config(self) -> Dict[str, Any]:
        """获取默认配置"""
        return {
            'symchain': {
                'logging': {
                    'level': 'INFO',
                    'file': '',
                    'max_size': 10485760,
                    'backup_count': 5
                },
                'chain': {
                    'limit': 12,
                    'mazur_bound': 12,
                    'specialization_probes': ['3', '5', '7/2', '-3', '11/3']
                },
                'identities': {
                    'random_tuples': 100,
                    'max_n': 6,
                    'seed': 20240601
                },
                'verify': {
                    'positivity_samples': 50
                },
                'concurrency': {
                    'max_workers': 4
                }
            }
        }

    def load_config(self) -> None:
        """加载配置文件"""
        try:
            if self.config_path.exists():
                with open(self.config_path, 'r', encoding='utf-8') as f:
                    loaded_config = yaml.safe_load(f)
                if loaded_config:
                    self.config = self._merge_config(self.default_config, loaded_config)
                else:
                    self.config = copy.deepcopy(self.default_config)
                    logger.warning("配置文件为空，使用默认配置")
            else:
                self.config = copy.deepcopy(self.default_config)
                logger.debug("配置文件不存在，使用默认配置")
                if self.create_if_missing:
                    self.save_config()

        except (OSError, yaml.YAMLError) as e:
            logger.error(f"加载配置失败: {e}")
            self.config = copy.deepcopy(self.default_config)

    def _merge_config(self, default: Dict[str, Any], loaded: Dict[str, Any]) -> Dict[str, Any]:
        """合并配置，loaded 覆盖 default"""
        result = copy.deepcopy(default)

        for key, value in loaded.items():
            if key in result and isinstance(result[key], dict) and isinstance(value, dict):
                result[key] = self._merge_config(result[key], value)
            else:
                result[key] = value

        return result

    def _reset(self, section: str, key: str, message: str) -> None:
        logger.warning(message)
        self.config['symchain'][section][key] = copy.deepcopy(
            self.default_config['symchain'][section][key])

    def validate_config(self) -> None:
        """验证配置，无效值重置为默认值"""
        if not isinstance(self.config.get('symchain'), dict):
            logger.warning("symchain 配置缺失或格式错误，使用默认配置")
            self.config['symchain'] = copy.deepcopy(self.default_config['symchain'])
        sc = self.config['symchain']
        for section, defaults in self.default_config['symchain'].items():
            if not isinstance(sc.get(section), dict):
                logger.warning(f"配置段 {section} 格式错误，使用默认值")
                sc[section] = copy.deepcopy(defaults)

        # 日志级别
        level = str(sc['logging'].get('level', '')).upper()
        if level not in LOG_LEVELS:
            self._reset('logging', 'level', f"不支持的日志级别: {sc['logging'].get('level')}，使用默认值")
        else:
            sc['logging']['level'] = level

        # 正整数配置
        positive = [('logging', 'max_size'), ('logging', 'backup_count'),
                    ('chain', 'limit'), ('chain', 'mazur_bound'),
                    ('identities', 'random_tuples'), ('identities', 'max_n'),
                    ('verify', 'positivity_samples'), ('concurrency', 'max_workers')]
        for section, key in positive:
            value = sc[section].get(key)
            if not isinstance(value, int) or isinstance(value, bool) or value <= 0:
                self._reset(section, key, f"{section}.{key} 配置无效: {value}，使用默认值")

        if not isinstance(sc['identities'].get('seed'), int):
            self._reset('identities', 'seed', "identities.seed 必须是整数，使用默认值")

        # 特殊化探测值
        probes = sc['chain'].get('specialization_probes')
        try:
            if not isinstance(probes, list):
                raise ValueError("not a list")
            [Fraction(str(p)) for p in probes]
        except (ValueError, ZeroDivisionError):
            self._reset('chain', 'specialization_probes', "特殊化探测值格式错误，使用默认值")

        logger.debug("配置验证完成")

    def save_config(self) -> None:
        """保存配置到文件"""
        try:
            self.config_path.parent.mkdir(parents=True, exist_ok=True)

            with open(self.config_path, 'w', encoding='utf-8') as f:
                yaml.dump(self.config, f, default_flow_style=False, allow_unicode=True, indent=2)

            logger.info(f"配置已保存到: {self.config_path}")

        except OSError as e:
            logger.error(f"保存配置失败: {e}")

    def get(self, key_path: str, default: Any = None) -> Any:
        """获取配置值，支持点号分隔的路径"""
        value: Any = self.config
        for key in key_path.split('.'):
            if isinstance(value, dict) and key in value:
                value = value[key]
            else:
                return default
        return value

    def set(self, key_path: str, value: Any) -> None:
        """设置配置值"""
        keys = key_path.split('.')
        config = self.config

        # 导航到最后一级的父配置
        for key in keys[:-1]:
            if not isinstance(config.get(key), dict):
                config[key] = {}
            config = config[key]

        config[keys[-1]] = value
        logger.debug(f"配置 {key_path} 已设置为: {value}")

    def get_logging_config(self) -> Dict[str, Any]:
        """获取日志配置；环境变量可以覆盖日志级别"""
        logging_config = dict(self.get('symchain.logging', {}))
        env_level = os.environ.get(ENV_LOG_LEVEL, '').upper()
        if env_level in LOG_LEVELS:
            logging_config['level'] = env_level
        elif env_level:
            logger.warning(f"环境变量 {ENV_LOG_LEVEL}={env_level} 无效，已忽略")
        return logging_config

    def get_chain_config(self) -> Dict[str, Any]:
        """获取点链配置"""
        return self.get('symchain.chain', {})

    def get_verify_config(self) -> Dict[str, Any]:
        """获取校验配置"""
        return self.get('symchain.verify', {})

    def get_identities_config(self) -> Dict[str, Any]:
        """获取恒等式检查配置"""
        return self.get('symchain.identities', {})

    def get_concurrency_config(self) -> Dict[str, Any]:
        """获取并发配置"""
        return self.get('symchain.concurrency', {})

    def get_chain_limit(self) -> int:
        return self.get('symchain.chain.limit', 12)

    def get_mazur_bound(self) -> int:
        return self.get('symchain.chain.mazur_bound', 12)

    def get_specialization_probes(self) -> List[Fraction]:
        return [Fraction(str(p)) for p in self.get('symchain.chain.specialization_probes', [])]

    def get_max_workers(self) -> int:
        return self.get('symchain.concurrency.max_workers', 4)

    def reload_config(self) -> None:
        """重新加载配置"""
        logger.info("重新加载配置...")
        self.load_config()
        self.validate_config()

    def reset_to_default(self) -> None:
        """重置为默认配置"""
        logger.info("重置为默认配置")
        self.config = copy.deepcopy(self.default_config)
        self.save_config()
