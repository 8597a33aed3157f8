from dataclasses import dataclass
from typing import Callable, Sequence
import logging
import numpy as np

from app.core.exceptions import EmptyPopulationError, SingularSystemError
from app.schemas.shs import ShsParameters, ShsSolution, ComplianceReport

logger = logging.getLogger(__name__)

IDLE, TRANSMITTING = 0, 1

# Скорости роста ages в режиме q, вектор [α0, α1]
GROWTH = {
    IDLE: np.array([1.0, 0.0]),
    TRANSMITTING: np.array([1.0, 1.0]),
}


@dataclass(frozen=True)
class ShsTransition:
    """Переход l: source -> target со скоростью rate(params) и отображением α' = α·reset"""
    name: str
    source: int
    target: int
    reset: tuple[tuple[float, float], tuple[float, float]]
    rate: Callable[[ShsParameters], float]

    @property
    def matrix(self) -> np.ndarray:
        return np.array(self.reset, dtype=float)


# Вектор состояния [α0 (AoMI), α1 (возраст передаваемого изображения)]
TRANSITIONS: tuple[ShsTransition, ...] = (
    # новое изображение в простое: α1' = 0, AoMI сохраняется
    ShsTransition("l1", IDLE, TRANSMITTING, ((1, 0), (0, 0)), lambda p: p.arrival_rate),
    # верная классификация: α0' = α1
    ShsTransition("l2", TRANSMITTING, IDLE, ((0, 0), (1, 0)), lambda p: p.success_prob / p.total_delay),
    # ошибка классификации: AoMI сохраняется
    ShsTransition("l3", TRANSMITTING, IDLE, ((1, 0), (0, 0)), lambda p: (1.0 - p.success_prob) / p.total_delay),
    # изображение во время передачи отбрасывается
    ShsTransition("l4", TRANSMITTING, TRANSMITTING, ((1, 0), (0, 1)), lambda p: p.arrival_rate),
)

_CONDITION_LIMIT = 1.0 / np.finfo(float).eps


class AoMIService:
    """Замкнутые выражения AoMI и SHS-система корреляционных векторов"""

    @staticmethod
    def stationary_probs(params: ShsParameters) -> tuple[float, float]:
        load = params.arrival_rate * params.total_delay
        return 1.0 / (1.0 + load), load / (1.0 + load)

    @staticmethod
    def build_correlation_system(params: ShsParameters) -> tuple[np.ndarray, np.ndarray]:
        """
        Собирает 4x4 систему стационарных уравнений SHS:
        v_q·Σ_{l из q} λ_l - Σ_{l в q} λ_l·v_{q_l}·A_l = b_q·π_q.
        Неизвестные упорядочены как (v00, v01, v10, v11).
        """
        pi = AoMIService.stationary_probs(params)
        matrix = np.zeros((4, 4))
        rhs = np.zeros(4)
        for q in (IDLE, TRANSMITTING):
            rhs[2 * q:2 * q + 2] = GROWTH[q] * pi[q]
        for tr in TRANSITIONS:
            rate = tr.rate(params)
            reset = tr.matrix
            for j in range(2):
                matrix[2 * tr.source + j, 2 * tr.source + j] += rate
                for i in range(2):
                    matrix[2 * tr.target + j, 2 * tr.source + i] -= rate * reset[i, j]
        return matrix, rhs

    @staticmethod
    def solve_correlation_system(params: ShsParameters) -> ShsSolution:
        matrix, rhs = AoMIService.build_correlation_system(params)
        condition = np.linalg.cond(matrix)
        if not np.isfinite(condition) or condition > _CONDITION_LIMIT:
            raise SingularSystemError(f"SHS system ill-conditioned (cond={condition:.3e}) for {params.model_dump()}")
        v = np.linalg.solve(matrix, rhs)
        # один шаг уточнения
        v = v + np.linalg.solve(matrix, rhs - matrix @ v)
        residual = float(np.max(np.abs(matrix @ v - rhs)))
        pi0, pi1 = AoMIService.stationary_probs(params)
        v00, v01, v10, v11 = (float(x) for x in v)
        return ShsSolution(
            pi0=pi0, pi1=pi1,
            v00=v00, v01=v01, v10=v10, v11=v11,
            aaomi=v00 + v10,
            residual=residual,
        )

    @staticmethod
    def correlation_residual(params: ShsParameters, solution: ShsSolution) -> float:
        """max |M·v - b| для переданного решения"""
        matrix, rhs = AoMIService.build_correlation_system(params)
        v = np.array([solution.v00, solution.v01, solution.v10, solution.v11])
        return float(np.max(np.abs(matrix @ v - rhs)))

    @staticmethod
    def closed_form_aaomi(params: ShsParameters) -> float:
        lam, rho, d = params.arrival_rate, params.success_prob, params.total_delay
        return 1.0 / (lam * rho) + d / rho + lam * d ** 2 / (1.0 + lam * d)

    @staticmethod
    def network_aaomi(per_user: Sequence[float]) -> float:
        if len(per_user) == 0:
            raise EmptyPopulationError("Network AAoMI needs at least one user")
        return float(np.mean(np.asarray(per_user, dtype=float)))

    @staticmethod
    def compliance_ratio(per_user: Sequence[float], threshold: float) -> ComplianceReport:
        """Γ = доля пользователей с AAoMI <= η (граница включительно)"""
        if threshold <= 0:
            raise ValueError("threshold must be positive")
        values = np.asarray(per_user, dtype=float)
        network = AoMIService.network_aaomi(values)
        compliant = int(np.count_nonzero(values <= threshold))
        return ComplianceReport(
            threshold=threshold,
            per_user_aaomi=[float(v) for v in values],
            compliance_ratio=compliant / values.size,
            compliant_users=compliant,
            network_aaomi=network,
        )
