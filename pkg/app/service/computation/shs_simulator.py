from dataclasses import dataclass
from typing import Optional, Sequence
import logging
import numpy as np

from app.core.exceptions import CalculationError
from app.core.executor import get_executor
from app.core.rng import SIMULATION_STREAM, derive_seed, float_keys, make_rng
from app.schemas.shs import ShsParameters, ShsState, SimResult, TraceEvent
from app.service.computation.aomi_service import GROWTH, IDLE, TRANSITIONS, TRANSMITTING, ShsTransition

logger = logging.getLogger(__name__)

WARMUP_FRACTION = 0.01
BATCHES = 32
# Число циклов (простой + передача) в одной порции генерации
CHUNK_CYCLES = 1 << 18
MODES = (IDLE, TRANSMITTING)


@dataclass(frozen=True)
class _ModeClocks:
    """Конкурирующие экспоненциальные часы всех переходов, выходящих из режима"""
    outgoing: np.ndarray
    cumprob: np.ndarray
    total_rate: float
    leave_rate: float


def _selection_table(transitions: Sequence[ShsTransition]) -> np.ndarray:
    """
    select[l, j]: номер компоненты α, которую переход l копирует в компоненту j,
    или -1, если компонента обнуляется.
    """
    select = np.full((len(transitions), 2), -1, dtype=np.int64)
    for index, tr in enumerate(transitions):
        reset = tr.matrix
        if not np.all((reset == 0.0) | (reset == 1.0)) or np.any(reset.sum(axis=0) > 1.0):
            raise CalculationError(f"Reset map of {tr.name} is not a 0/1 column selection: {tr.reset}")
        for j in range(2):
            rows = np.flatnonzero(reset[:, j])
            if rows.size:
                select[index, j] = rows[0]
    return select


def _mode_clocks(params: ShsParameters, transitions: Sequence[ShsTransition]) -> dict[int, _ModeClocks]:
    clocks = {}
    for mode in MODES:
        outgoing = [i for i, tr in enumerate(transitions) if tr.source == mode]
        rates = np.array([transitions[i].rate(params) for i in outgoing], dtype=float)
        total = float(rates.sum())
        leave = float(sum(r for i, r in zip(outgoing, rates) if transitions[i].target != mode))
        if leave <= 0.0:
            raise CalculationError(f"Mode {mode} has no outgoing transition with positive rate")
        clocks[mode] = _ModeClocks(
            outgoing=np.array(outgoing, dtype=np.int64),
            cumprob=np.cumsum(rates) / total,
            total_rate=total,
            leave_rate=leave,
        )
    return clocks


def _sojourn_index(leave: np.ndarray, size: int) -> np.ndarray:
    """Номер пребывания для каждой из первых size пар: число уходов строго до нее"""
    ends = np.zeros(size, dtype=np.int64)
    ends[leave] = 1
    return np.concatenate(([0], np.cumsum(ends[:-1])))


def _sample_cycles(
    clocks: dict[int, _ModeClocks],
    targets: np.ndarray,
    cycles: int,
    rng: np.random.Generator,
) -> Optional[tuple[np.ndarray, np.ndarray]]:
    """
    Последовательность событий из целого числа циклов, начиная и заканчивая в простое.

    Для каждого режима заранее разыгрываются независимые пары (время до события, переход):
    k-е посещение режима использует k-ю пару. Пребывание в режиме заканчивается на первой
    паре с переходом в другой режим, пребывания в простое и в передаче чередуются.
    """
    draws = {}
    for mode, clock in clocks.items():
        size = int(cycles * clock.total_rate / clock.leave_rate * 1.05) + 64
        dt = rng.exponential(1.0 / clock.total_rate, size)
        pick = np.searchsorted(clock.cumprob, rng.random(size), side="right")
        trans = clock.outgoing[np.minimum(pick, clock.outgoing.size - 1)]
        leaving = np.flatnonzero(targets[trans] != mode)
        draws[mode] = (dt, trans, leaving)

    n = min(d[2].size for d in draws.values())
    if n == 0:
        return None
    idle_dt, idle_trans, idle_leave = draws[IDLE]
    busy_dt, busy_trans, busy_leave = draws[TRANSMITTING]
    idle_leave, busy_leave = idle_leave[:n], busy_leave[:n]
    n_idle, n_busy = int(idle_leave[-1]) + 1, int(busy_leave[-1]) + 1

    # позиция в общей последовательности = своя позиция + события другого режима в предыдущих пребываниях
    busy_before = np.concatenate(([0], busy_leave[:-1] + 1))
    idle_pos = np.arange(n_idle) + busy_before[_sojourn_index(idle_leave, n_idle)]
    busy_pos = np.arange(n_busy) + idle_leave[_sojourn_index(busy_leave, n_busy)] + 1

    dt = np.empty(n_idle + n_busy)
    trans = np.empty(n_idle + n_busy, dtype=np.int64)
    dt[idle_pos], trans[idle_pos] = idle_dt[:n_idle], idle_trans[:n_idle]
    dt[busy_pos], trans[busy_pos] = busy_dt[:n_busy], busy_trans[:n_busy]
    return dt, trans


def _chunk_ages(
    dt: np.ndarray,
    trans: np.ndarray,
    modes: np.ndarray,
    growth: np.ndarray,
    select: np.ndarray,
    start: np.ndarray,
) -> np.ndarray:
    """
    α = [α0, α1] после каждого события порции, start - значение в начале порции.

    Компонента j после события k равна значению, записанному последним переходом,
    который изменил j, плюс рост j с того момента. Записанное значение берется из
    компоненты-источника перед скачком, поэтому вычисление повторяется, пока
    значения не перестанут меняться (число проходов = глубина цепочки копирований + 1).
    """
    n = dt.size
    index = np.arange(n)
    gain = growth[modes] * dt[:, None]
    clock = np.cumsum(gain, axis=0)
    source = select[trans]

    last = np.empty((n, 2), dtype=np.int64)
    for j in range(2):
        last[:, j] = np.maximum.accumulate(np.where(source[:, j] != j, index, -1))
    has_last = last >= 0
    last = np.where(has_last, last, 0)
    drift = clock - np.where(has_last, np.take_along_axis(clock, last, axis=0), 0.0)
    pick = np.where(source >= 0, source, 0)

    ages = drift + start
    for _ in range(n + 1):
        before = np.vstack((start, ages[:-1])) + gain
        written = np.where(source >= 0, np.take_along_axis(before, pick, axis=1), 0.0)
        updated = drift + np.where(has_last, np.take_along_axis(written, last, axis=0), start)
        if np.array_equal(updated, ages):
            break
        ages = updated
    return ages


class SimulationService:
    """
    Монте-Карло траекторий SHS: независимая проверка замкнутой формулы AAoMI.

    simulate и trace разыгрывают события по общей таблице TRANSITIONS: в каждом режиме
    конкурируют экспоненциальные часы всех исходящих переходов, ages растут со скоростями
    GROWTH и сбрасываются отображениями переходов.
    """

    @staticmethod
    def simulate(
        params: ShsParameters,
        horizon: float,
        seed: int,
        warmup_fraction: float = WARMUP_FRACTION,
        batches: int = BATCHES,
    ) -> SimResult:
        """
        Симуляция на [0, T] из q=0, α0=α1=0. Среднее по времени считается на [warmup, T],
        стандартная ошибка - по методу средних по батчам.
        """
        if horizon <= 0:
            raise ValueError("horizon must be positive")
        rng = make_rng(seed)
        transitions = TRANSITIONS
        select = _selection_table(transitions)
        sources = np.array([tr.source for tr in transitions], dtype=np.int64)
        targets = np.array([tr.target for tr in transitions], dtype=np.int64)
        growth = np.vstack([GROWTH[mode] for mode in MODES])
        clocks = _mode_clocks(params, transitions)
        cycle_mean = sum(1.0 / c.leave_rate for c in clocks.values())

        warmup = warmup_fraction * horizon
        edges = np.linspace(warmup, horizon, batches + 1)
        area_at = np.full(edges.size, np.nan)
        busy_at = np.full(edges.size, np.nan)
        counts = np.zeros(len(transitions), dtype=np.int64)

        now, area, busy = 0.0, 0.0, 0.0
        ages = np.zeros(2)
        while now < horizon:
            cycles = int(min(CHUNK_CYCLES, (horizon - now) / cycle_mean * 1.02 + 64))
            chunk = _sample_cycles(clocks, targets, cycles, rng)
            if chunk is None:
                continue
            dt, trans = chunk
            modes = sources[trans]
            times = now + np.cumsum(dt)
            after = _chunk_ages(dt, trans, modes, growth, select, ages)

            # интервал k: (starts[k], times[k]] в режиме modes[k], α0 растет от before0[k]
            starts = np.concatenate(([now], times[:-1]))
            before0 = np.concatenate(([ages[0]], after[:-1, 0]))
            slope = growth[modes, 0]
            in_service = modes == TRANSMITTING
            cum_area = area + np.concatenate(([0.0], np.cumsum(before0 * dt + 0.5 * slope * dt ** 2)))
            cum_busy = busy + np.concatenate(([0.0], np.cumsum(np.where(in_service, dt, 0.0))))

            inside = (edges >= now) & (edges <= times[-1]) & np.isnan(area_at)
            if inside.any():
                x = edges[inside]
                k = np.searchsorted(times, x, side="left")
                part = x - starts[k]
                area_at[inside] = cum_area[k] + before0[k] * part + 0.5 * slope[k] * part ** 2
                busy_at[inside] = cum_busy[k] + np.where(in_service[k], part, 0.0)

            counts += np.bincount(trans[times <= horizon], minlength=len(transitions))
            now, area, busy = float(times[-1]), float(cum_area[-1]), float(cum_busy[-1])
            ages = after[-1]

        widths = np.diff(edges)
        batch_aomi = np.diff(area_at) / widths
        batch_busy = np.diff(busy_at) / widths
        window = horizon - warmup
        time_avg = float((area_at[-1] - area_at[0]) / window)
        transmitting = float((busy_at[-1] - busy_at[0]) / window)

        return SimResult(
            time_avg_aomi=time_avg,
            std_error=float(np.std(batch_aomi, ddof=1) / np.sqrt(batches)),
            occupancy=(1.0 - transmitting, transmitting),
            occupancy_std_error=float(np.std(batch_busy, ddof=1) / np.sqrt(batches)),
            event_counts={tr.name: int(c) for tr, c in zip(transitions, counts)},
            horizon=horizon,
            warmup=warmup,
            seed=int(seed),
        )

    @staticmethod
    def batch_seed(master_seed: int, params: ShsParameters, key: Optional[Sequence[int]] = None) -> int:
        """Подпоток записи батча: из явного ключа или из содержимого параметров"""
        keys = tuple(key) if key is not None else float_keys(
            (params.arrival_rate, params.success_prob, params.total_delay)
        )
        return derive_seed(master_seed, SIMULATION_STREAM, *keys)

    @staticmethod
    def simulate_batch(
        params_list: Sequence[ShsParameters],
        horizon: float,
        master_seed: int,
        keys: Optional[Sequence[Sequence[int]]] = None,
    ) -> list[SimResult]:
        if not params_list:
            raise ValueError("params_list must not be empty")
        if keys is not None and len(keys) != len(params_list):
            raise ValueError("keys must match params_list")
        seeds = [
            SimulationService.batch_seed(master_seed, p, None if keys is None else keys[i])
            for i, p in enumerate(params_list)
        ]
        # map сохраняет порядок входа
        results = list(get_executor().map(
            lambda args: SimulationService.simulate(args[0], horizon, args[1]),
            zip(params_list, seeds),
        ))
        logger.info(f"Simulated batch of {len(results)} trajectories, horizon {horizon} s")
        return results

    @staticmethod
    def trace(params: ShsParameters, horizon: float, seed: int) -> list[TraceEvent]:
        """
        Пошаговая траектория по общей таблице переходов: после каждого события
        заново разыгрываются экспоненциальные часы всех исходящих переходов.
        """
        rng = make_rng(seed)
        state = ShsState(mode=IDLE, age_current=0.0, age_pending=0.0, clock=0.0)
        events = [TraceEvent(t=0.0, q=IDLE, alpha0_before=0.0, alpha0=0.0, alpha1=0.0, event="start")]
        while True:
            outgoing = [tr for tr in TRANSITIONS if tr.source == state.mode]
            rates = np.array([tr.rate(params) for tr in outgoing])
            total = rates.sum()
            dt = rng.exponential(1.0 / total)
            if state.clock + dt > horizon:
                break
            alpha = np.array([state.age_current, state.age_pending])
            before = alpha + GROWTH[state.mode] * dt
            if abs((before[0] - alpha[0]) - dt) > 1e-9 * max(1.0, dt):
                raise CalculationError(f"AoMI growth rate violated at t={state.clock + dt}")
            chosen = outgoing[rng.choice(len(outgoing), p=rates / total)]
            after = before @ chosen.matrix
            state = ShsState(
                mode=chosen.target,
                age_current=float(after[0]),
                age_pending=float(after[1]),
                clock=state.clock + dt,
            )
            events.append(TraceEvent(
                t=state.clock, q=state.mode, alpha0_before=float(before[0]),
                alpha0=state.age_current, alpha1=state.age_pending, event=chosen.name,
            ))
        return events

    @staticmethod
    def time_average_from_trace(events: Sequence[TraceEvent], horizon: float) -> float:
        """Точная сумма трапеций по трассе на [0, horizon]"""
        area = 0.0
        for prev, cur in zip(events, events[1:]):
            area += 0.5 * (prev.alpha0 + cur.alpha0_before) * (cur.t - prev.t)
        last = events[-1]
        tail = horizon - last.t
        area += last.alpha0 * tail + 0.5 * tail ** 2
        return area / horizon
