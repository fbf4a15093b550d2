"""
错误处理
统一的异常层次、错误类型枚举、错误统计与退出码映射
"""
import asyncio
import logging
import time
from enum import Enum
from typing import Any, Callable, Dict, Optional

logger = logging.getLogger(__name__)


class ErrorType(Enum):
    """错误类型枚举"""
    PARSE_ERROR = "parse_error"
    USAGE_ERROR = "usage_error"
    MATH_ERROR = "math_error"
    DEGENERATE_CURVE = "degenerate_curve"
    SINGULAR_CURVE = "singular_curve"
    BRANCH_POINT = "branch_point"
    EXCEPTIONAL_POINT = "exceptional_point"
    NOT_ON_CURVE = "not_on_curve"
    CERTIFICATION_ERROR = "certification_error"
    CHAIN_ERROR = "chain_error"
    FAMILY_PARAMETER_ERROR = "family_parameter_error"
    SPECIALIZATION_ERROR = "specialization_error"
    VERIFICATION_FAILURE = "verification_failure"


class SymchainError(Exception):
    """所有可预期错误的基类"""
    error_type = ErrorType.MATH_ERROR

    def __init__(self, message: str = "", **context: Any):
        super().__init__(message)
        self.message = message
        self.context = context

    @property
    def code(self) -> str:
        return self.error_type.value


class ParseError(SymchainError):
    error_type = ErrorType.PARSE_ERROR


class UsageError(SymchainError):
    error_type = ErrorType.USAGE_ERROR


class MathError(SymchainError):
    error_type = ErrorType.MATH_ERROR


class DegenerateCurveError(SymchainError):
    error_type = ErrorType.DEGENERATE_CURVE


class SingularCurveError(SymchainError):
    error_type = ErrorType.SINGULAR_CURVE


class BranchPointError(SymchainError):
    error_type = ErrorType.BRANCH_POINT


class ExceptionalPointError(SymchainError):
    """拉回落在双有理映射的例外集合中"""
    error_type = ErrorType.EXCEPTIONAL_POINT

    def __init__(self, message: str = "", member: str = "", **context: Any):
        super().__init__(message, **context)
        self.member = member


class PointNotOnCurveError(SymchainError):
    error_type = ErrorType.NOT_ON_CURVE


class CertificationError(SymchainError):
    error_type = ErrorType.CERTIFICATION_ERROR


class ChainError(SymchainError):
    error_type = ErrorType.CHAIN_ERROR


class FamilyParameterError(SymchainError):
    error_type = ErrorType.FAMILY_PARAMETER_ERROR


class SpecializationError(SymchainError):
    error_type = ErrorType.SPECIALIZATION_ERROR


class VerificationFailure(SymchainError):
    error_type = ErrorType.VERIFICATION_FAILURE


def classify(error: BaseException, default: ErrorType = ErrorType.MATH_ERROR) -> ErrorType:
    """把任意异常归到一个错误类型；无法识别的异常归为 default"""
    if isinstance(error, SymchainError):
        return error.error_type
    if isinstance(error, (ZeroDivisionError, ArithmeticError)):
        return ErrorType.MATH_ERROR
    if isinstance(error, (ValueError, KeyError, TypeError)):
        return ErrorType.PARSE_ERROR
    return default


class ErrorHandler:
    """错误处理器：记录统计并生成机器可读的错误信息"""

    def __init__(self):
        self.error_counts: Dict[str, int] = {}
        self.last_errors: Dict[ErrorType, dict] = {}
        self.last_payload: Optional[dict] = None
        self.last_exit_code = 0

    def handle_error(self, error: BaseException, context: dict = None,
                     default_type: ErrorType = ErrorType.MATH_ERROR) -> dict:
        """记录错误，返回 {"error": code, "message": ...}"""
        context = context or {}
        error_type = classify(error, default_type)
        message = str(error) or error.__class__.__name__

        self.error_counts[error_type.value] = self.error_counts.get(error_type.value, 0) + 1
        self.last_errors[error_type] = {
            'error': message,
            'timestamp': time.time(),
            'context': context
        }

        if error_type == ErrorType.VERIFICATION_FAILURE:
            logger.warning(f"Verification failed: {message}")
        else:
            logger.error(f"Handling {error_type.value}: {message}")

        self.last_payload = {'error': error_type.value, 'message': message}
        self.last_exit_code = self.exit_code_for(error)
        return self.last_payload

    @staticmethod
    def exit_code_for(error: BaseException) -> int:
        """校验失败退出码 1，其余错误 2"""
        return 1 if classify(error) == ErrorType.VERIFICATION_FAILURE else 2

    def get_error_stats(self) -> dict:
        """获取错误统计"""
        return {
            'total_errors': sum(self.error_counts.values()),
            'error_types': len(self.error_counts),
            'error_counts': dict(self.error_counts),
            'last_errors': {k.value: v for k, v in self.last_errors.items()}
        }

    def reset_error_counts(self):
        """重置错误计数"""
        self.error_counts.clear()
        self.last_errors.clear()
        self.last_payload = None
        self.last_exit_code = 0
        logger.info("Error counts reset")


# 全局错误处理器实例
_global_error_handler = None


def get_error_handler() -> ErrorHandler:
    """获取全局错误处理器"""
    global _global_error_handler
    if _global_error_handler is None:
        _global_error_handler = ErrorHandler()
    return _global_error_handler


async def safe_execute(func: Callable, *args, error_type: ErrorType = ErrorType.MATH_ERROR,
                       context: dict = None, **kwargs) -> tuple[Any, bool]:
    """安全执行函数，出错时交给全局错误处理器

    error_type 是无法识别的异常所归的类型；返回 (结果, 是否成功)，失败时结果为 None，
    错误信息和退出码留在处理器的 last_payload / last_exit_code 上。
    """
    error_handler = get_error_handler()

    try:
        if asyncio.iscoroutinefunction(func):
            result = await func(*args, **kwargs)
        else:
            result = func(*args, **kwargs)
        return result, True

    except Exception as e:
        if not isinstance(e, SymchainError):
            logger.debug(f"Unexpected {e.__class__.__name__} in {getattr(func, '__name__', func)}",
                         exc_info=True)
        error_handler.handle_error(e, context, error_type)
        return None, False
