from dataclasses import dataclass
from typing import Literal

from domkit.config import load_config
from domkit.models import ConstructorParams, CoopSettings, Limits


@dataclass(frozen=True)
class WorkbenchContext:
    """Everything a command needs besides its inputs."""

    limits: Limits
    constructors: ConstructorParams
    coop: CoopSettings
    log_level: str = "WARNING"


class WorkbenchContextProvider:
    """
    Service locator/provider for workbench contexts.
    """

    @staticmethod
    def get_default_context(config_path: str = "") -> WorkbenchContext:
        """
        Factory method to create a context from the configuration file.

        Args:
            config_path: Path to the configuration file. If not provided,
                         the function will search for a config file in standard locations.

        Returns:
            A configured WorkbenchContext
        """
        config = load_config(config_path)
        limits = Limits(**config["limits"])
        return WorkbenchContext(
            limits=limits,
            constructors=ConstructorParams(
                **{"cardinality_cap": limits.cardinality_cap, **config["constructors"]}
            ),
            coop=CoopSettings(**config["coop"]),
            log_level=str(config["logging"]["level"]).upper(),
        )

    @staticmethod
    def get_context_from_params(
        subset_cap: int = 14,
        iso_limit: int = 12,
        am_product_cap: int = 20,
        function_space_cap: int = 4096,
        cardinality_cap: int = 5000,
        max_seq_len: int = 2,
        record_ordering: Literal["pointwise", "equal-keys"] = "pointwise",
        coop_max_seq_len: int = 1,
        coop_max_iters: int = 3,
        log_level: str = "WARNING",
    ) -> WorkbenchContext:
        """
        Alternative factory method that creates a context using parameter values directly.

        This method is provided for testing.

        Returns:
            A configured WorkbenchContext
        """
        return WorkbenchContext(
            limits=Limits(
                subset_cap=subset_cap,
                iso_limit=iso_limit,
                am_product_cap=am_product_cap,
                function_space_cap=function_space_cap,
                cardinality_cap=cardinality_cap,
            ),
            constructors=ConstructorParams(
                max_seq_len=max_seq_len,
                cardinality_cap=cardinality_cap,
                record_ordering=record_ordering,
            ),
            coop=CoopSettings(
                max_seq_len=coop_max_seq_len,
                max_iters=coop_max_iters,
                cardinality_cap=cardinality_cap,
            ),
            log_level=log_level,
        )
