from typing import Optional
from app.core.exceptions import SchemeConfigError
from app.schemas.scheme import ImageSource, SchemeConfig, SchemeKind


class SchemeService:
    """Число символов, коэффициент сжатия и бюджет задержки схем DJSCC/SSCC"""

    @staticmethod
    def djscc_symbol_count(source: ImageSource, delta: int, n_con: int) -> int:
        """n_T = (I_H·I_W / 2^(2δ))·n_con"""
        if delta < 0 or n_con < 1:
            raise SchemeConfigError(f"Invalid DJSCC parameters delta={delta}, n_con={n_con}")
        factor = 2 ** delta
        if source.height % factor or source.width % factor:
            raise SchemeConfigError(
                f"2^delta={factor} must divide image size {source.height}x{source.width}"
            )
        return (source.height // factor) * (source.width // factor) * n_con

    @staticmethod
    def bandwidth_ratio(source: ImageSource, scheme: SchemeConfig) -> float:
        return scheme.symbol_count / source.pixel_count

    @staticmethod
    def validate_scheme(source: ImageSource, scheme: SchemeConfig) -> None:
        if scheme.kind != SchemeKind.DJSCC:
            return
        expected = SchemeService.djscc_symbol_count(source, scheme.downsampling_stages, scheme.feature_channels)
        if scheme.symbol_count != expected:
            raise SchemeConfigError(
                f"Scheme '{scheme.name}': symbol_count {scheme.symbol_count} != {expected} "
                f"from delta={scheme.downsampling_stages}, n_con={scheme.feature_channels}"
            )

    @staticmethod
    def total_delay(scheme: SchemeConfig, classify_delay: Optional[float] = None) -> float:
        """D_total = D_enc + n_T·T_s + D_cls; D_cls можно переопределить для пользователя"""
        d_cls = scheme.classify_delay if classify_delay is None else classify_delay
        if d_cls < 0:
            raise SchemeConfigError(f"Negative classify delay {d_cls}")
        return scheme.encode_delay + scheme.symbol_count * scheme.symbol_duration + d_cls
