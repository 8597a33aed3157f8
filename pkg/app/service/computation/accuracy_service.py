from pathlib import Path
from typing import Optional, Sequence, Union
import logging
import numpy as np
import pandas as pd
from pydantic import ValidationError
from scipy.special import expit

from app.core.exceptions import ConfigurationError, ProfileError, ResourceNotFoundError
from app.core.units import linear_to_db, as_scalar
from app.schemas.accuracy import AccuracyProfile, ProfileKind, UserAccuracy
from app.schemas.channel import UserChannel
from app.service.computation.channel_service import ChannelService

logger = logging.getLogger(__name__)

# ρ_u < 1 строго
EPS_CLAMP = 1e-9


class AccuracyService:

    @staticmethod
    def accuracy_at_snr(profile: AccuracyProfile, snr_db):
        """
        Вероятность правильной классификации при заданном SNR (dB).
        Сигмоида: floor + (ceiling - floor)/(1 + exp(-slope·(snr - midpoint))).
        Таблица: линейная интерполяция, за пределами - граничные строки.
        """
        x = np.asarray(snr_db, dtype=float)
        if profile.kind == ProfileKind.PARAMETRIC_SIGMOID:
            with np.errstate(invalid="ignore"):
                shape = expit(profile.slope * (x - profile.midpoint_snr))
            # slope = 0 при x = ±inf дает nan
            shape = np.nan_to_num(shape, nan=0.5)
            return as_scalar(profile.floor + (profile.ceiling - profile.floor) * shape)

        if len(profile.table) < 2:
            raise ProfileError("Tabulated profile needs at least 2 rows")
        table = np.asarray(profile.table, dtype=float)
        if np.any(np.diff(table[:, 0]) <= 0):
            raise ProfileError("Tabulated snr_db must be strictly increasing")
        return as_scalar(np.interp(x, table[:, 0], table[:, 1]))

    @staticmethod
    def expected_accuracy(
        profile: AccuracyProfile,
        user: UserChannel,
        samples: int,
        scheme: str = "",
        fading_gains: Optional[np.ndarray] = None,
    ) -> UserAccuracy:
        """
        ρ_u как среднее мгновенной точности по мелкомасштабному замиранию
        (крупномасштабный коэффициент пользователя фиксирован).
        fading_gains - общие случайные числа; без них выборка берется из user.fading.
        """
        if fading_gains is None:
            if samples < 1:
                raise ValueError("samples must be >= 1")
            fading_gains = ChannelService.sample_fading_power(user.fading, samples)
        gains = np.asarray(fading_gains, dtype=float)
        snr_db = linear_to_db(ChannelService.snr_linear(user, gains))
        accuracy = np.atleast_1d(AccuracyService.accuracy_at_snr(profile, snr_db))

        n = accuracy.size
        rho = float(np.mean(accuracy))
        std_error = float(np.std(accuracy, ddof=1) / np.sqrt(n)) if n > 1 else 0.0
        if rho > 1.0 - EPS_CLAMP:
            logger.debug(f"User {user.user_id}: accuracy {rho} clamped to 1 - {EPS_CLAMP}")
        rho = min(max(rho, 0.0), 1.0 - EPS_CLAMP)
        return UserAccuracy(user_id=user.user_id, scheme=scheme, rho=rho, sample_count=n, std_error=std_error)

    @staticmethod
    def tabulate_profile(profile: AccuracyProfile, snr_grid: Sequence[float]) -> AccuracyProfile:
        grid = np.asarray(snr_grid, dtype=float)
        values = np.atleast_1d(AccuracyService.accuracy_at_snr(profile, grid))
        return AccuracyProfile(
            kind=ProfileKind.TABULATED,
            floor=float(values.min()),
            ceiling=float(values.max()),
            table=tuple((float(s), float(a)) for s, a in zip(grid, values)),
        )

    @staticmethod
    def load_profile_csv(path: Union[str, Path]) -> AccuracyProfile:
        """Измеренная кривая точности: CSV с заголовком snr_db,accuracy"""
        path = Path(path)
        if not path.is_file():
            raise ResourceNotFoundError(f"Accuracy profile CSV not found: {path}")
        try:
            frame = pd.read_csv(path)
        except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as e:
            raise ConfigurationError(f"Cannot parse accuracy profile {path}: {e}") from e
        missing = {"snr_db", "accuracy"} - set(frame.columns)
        if missing:
            raise ConfigurationError(f"Accuracy profile {path} lacks columns {sorted(missing)}")
        frame = frame[["snr_db", "accuracy"]].astype(float)
        try:
            return AccuracyProfile(
                kind=ProfileKind.TABULATED,
                floor=float(frame["accuracy"].min()),
                ceiling=float(frame["accuracy"].max()),
                table=tuple((float(s), float(a)) for s, a in frame.itertuples(index=False)),
                source=str(path),
            )
        except ValidationError as e:
            raise ConfigurationError(f"Invalid accuracy profile {path}: {e}") from e
