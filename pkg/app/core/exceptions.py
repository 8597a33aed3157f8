class AppBaseException(Exception):
    """Базовый класс для всех ошибок приложения"""
    pass

class ConfigurationError(AppBaseException):
    """Ошибка: сценарий или файл профиля точности некорректен"""
    pass

class ResourceNotFoundError(AppBaseException):
    """Ошибка: ресурс (файл сценария, задача, CSV) не найден"""
    pass

class CalculationError(AppBaseException):
    """Общая ошибка в процессе вычислений"""
    pass

class ChannelDomainError(CalculationError):
    """Ошибка: геометрия линии вне области определения (отрицательное подкоренное выражение)"""
    pass

class SchemeConfigError(CalculationError):
    """Ошибка: параметры схемы несовместимы (делимость 2^δ, число символов DJSCC)"""
    pass

class ProfileError(CalculationError):
    """Ошибка: профиль точности некорректен (таблица, границы)"""
    pass

class SingularSystemError(CalculationError):
    """Ошибка: линейная система SHS вырождена или плохо обусловлена"""
    pass

class EmptyPopulationError(CalculationError):
    """Ошибка: пустой список пользователей"""
    pass

class SweepError(CalculationError):
    """Ошибка в ячейке развертки (altitude, scheme, power) с контекстом строки"""
    pass

class ValidationFailedError(AppBaseException):
    """Ошибка: Монте-Карло отклоняется от замкнутой формулы сильнее допуска"""
    pass
