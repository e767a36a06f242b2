"""
Experiment configuration.

A configuration is a flat key=value text file whose keys carry a section
prefix (data., net., train., stop., out.). Every key is declared once in
CONFIG_SCHEMA, which also drives the command-line flags.
"""

from dataclasses import dataclass, field
from pathlib import Path
import logging
from typing import Dict, Optional, Union
from constructive_nn.data.schema import DatasetSchema, get_schema, read_schema
from constructive_nn.data.split import SPLIT_ORDERS
from constructive_nn.errors import ConfigError, SchemaError
from constructive_nn.growth import StoppingCriteria
from constructive_nn.helpers.params import (
    flatten_params,
    format_key_values,
    nest_params,
    read_key_values
)
from constructive_nn.network import NetworkConfig, NewUnitInit
from constructive_nn.training import TrainConfig

logger = logging.getLogger(__name__)

CONFIG_SCHEMA = {
    "data": {
        "type": "object",
        "label": "Dataset",
        "properties": {
            "name": {
                "type": "string",
                "default": None,
                "help": "Bundled dataset schema (cancer, cancer1, heart, diabetes)"
            },
            "schema": {
                "type": "path",
                "default": None,
                "help": "Schema file to use instead of a bundled one"
            },
            "path": {
                "type": "path",
                "default": None,
                "help": "Raw UCI file or Proben1 .dt file"
            },
            "order": {
                "type": "string",
                "enum": SPLIT_ORDERS,
                "default": "file_order",
                "help": """
                Order of the patterns before partitioning. seeded_shuffle
                permutes them with the shuffling seed (train.seed).
                """
            }
        }
    },
    "net": {
        "type": "object",
        "label": "Network",
        "properties": {
            "hidden_units": {
                "type": "integer",
                "min_value": 1,
                "default": 1,
                "help": "Hidden units of the fixed-topology baseline (growth starts from 1)"
            },
            "init_range": {
                "type": "float",
                "min_value": 0.0,
                "default": 0.5,
                "help": "Weights are drawn uniformly from [-r, +r]"
            },
            "seed": {
                "type": "integer",
                "min_value": 0,
                "default": 0,
                "help": "Seed of the weight generator"
            },
            "new_unit": {
                "type": "string",
                "enum": ["random", "zero"],
                "default": "random",
                "help": "Initialization of every added hidden unit"
            }
        }
    },
    "train": {
        "type": "object",
        "label": "Training",
        "properties": {
            "learning_rate": {
                "type": "float",
                "min_value": 0.0,
                "default": 0.1,
                "help": "Step size of online backpropagation"
            },
            "momentum": {
                "type": "float",
                "min_value": 0.0,
                "max_value": 1.0,
                "default": 0.9,
                "help": "Fraction of the previous update carried into the next"
            },
            "epochs_per_phase": {
                "type": "integer",
                "min_value": 1,
                "default": 500,
                "help": "Passes over the training split per phase"
            },
            "shuffle": {
                "type": "boolean",
                "default": True,
                "help": "Visit training patterns in a fresh order every epoch"
            },
            "seed": {
                "type": "integer",
                "min_value": 0,
                "default": 0,
                "help": "Seed of the shuffling generator"
            }
        }
    },
    "stop": {
        "type": "object",
        "label": "Stopping criteria",
        "properties": {
            "max_validation_error": {
                "type": "float",
                "min_value": 0.0,
                "default": None,
                "help": "Acceptable mean validation error (default depends on the dataset)"
            },
            "min_efficiency": {
                "type": "float",
                "min_value": 0.0,
                "max_value": 100.0,
                "default": None,
                "help": "Acceptable efficiency in percent (default depends on the dataset)"
            },
            "max_hidden_units": {
                "type": "integer",
                "min_value": 1,
                "default": 8,
                "help": "Growth stops at this many hidden units"
            },
            "per_phase_epochs": {
                "type": "integer",
                "min_value": 1,
                "default": None,
                "help": "Epochs per growth phase (overrides train.epochs_per_phase)"
            },
            "strict": {
                "type": "boolean",
                "default": False,
                "help": "Check the efficiency on the validation split instead of the test split"
            }
        }
    },
    "out": {
        "type": "object",
        "label": "Outputs",
        "properties": {
            "dir": {
                "type": "path",
                "default": None,
                "help": "Run directory (default: runs/<dataset>)"
            },
            "html": {
                "type": "boolean",
                "default": False,
                "help": "Also write plotly figures of the error curve and growth trace"
            }
        }
    }
}

# Stopping thresholds calibrated on the best networks reported per dataset
DATASET_STOP_DEFAULTS = {
    "cancer": dict(max_validation_error=0.02, min_efficiency=96.0),
    "cancer1": dict(max_validation_error=0.03, min_efficiency=97.0),
    "heart": dict(max_validation_error=0.09, min_efficiency=80.0),
    "diabetes": dict(max_validation_error=0.24, min_efficiency=70.0)
}
FALLBACK_STOP_DEFAULTS = dict(max_validation_error=0.02, min_efficiency=96.0)

TRUE_VALUES = ["true", "yes", "on", "1"]
FALSE_VALUES = ["false", "no", "off", "0"]


def config_keys() -> Dict[str, dict]:
    """Every configuration key with its declaration, e.g. 'train.seed'."""
    return {
        f"{section}.{kw}": elem
        for section, section_schema in CONFIG_SCHEMA.items()
        for kw, elem in section_schema["properties"].items()
    }


def coerce_value(key: str, value, base_dir: Optional[Path] = None):
    """Convert a raw (string) value to the type declared for key."""
    keys = config_keys()
    if key not in keys:
        raise ConfigError(f"Unknown configuration key '{key}'")
    elem = keys[key]
    if value is None:
        return None
    if isinstance(value, str):
        value = value.strip()
        if value.lower() in ["", "none", "null"]:
            return None

    try:
        if elem["type"] == "integer":
            if isinstance(value, float) or (isinstance(value, str) and "." in value):
                raise ValueError
            value = int(value)
        elif elem["type"] == "float":
            value = float(value)
        elif elem["type"] == "boolean":
            if isinstance(value, str):
                if value.lower() in TRUE_VALUES:
                    value = True
                elif value.lower() in FALSE_VALUES:
                    value = False
                else:
                    raise ValueError
            value = bool(value)
        elif elem["type"] == "path":
            value = Path(value)
            if base_dir is not None and not value.is_absolute():
                value = base_dir / value
        else:
            value = str(value)
    except ValueError:
        raise ConfigError(f"'{key}' expects a value of type {elem['type']}, not '{value}'")

    if "enum" in elem and value not in elem["enum"]:
        raise ConfigError(f"'{key}' must be one of {elem['enum']}, not '{value}'")
    if elem.get("min_value") is not None and value < elem["min_value"]:
        raise ConfigError(f"'{key}' must be >= {elem['min_value']}, not {value}")
    if elem.get("max_value") is not None and value > elem["max_value"]:
        raise ConfigError(f"'{key}' must be <= {elem['max_value']}, not {value}")
    return value


def default_params() -> Dict[str, object]:
    return {key: elem["default"] for key, elem in config_keys().items()}


@dataclass
class ExperimentConfig:
    """A fully resolved and validated experiment."""
    schema: DatasetSchema
    data_path: Path
    order: str
    net: NetworkConfig
    train: TrainConfig
    stop: StoppingCriteria
    new_unit: NewUnitInit
    out_dir: Path
    html: bool = False
    # Every key with its final value, defaults included
    params: Dict[str, object] = field(default_factory=dict)
    # Config file the experiment was read from
    source: Optional[Path] = None

    @property
    def dataset_name(self) -> str:
        return self.schema.name

    @property
    def split_seed(self) -> Optional[int]:
        return self.train.seed if self.order == "seeded_shuffle" else None

    def resolved(self) -> Dict[str, object]:
        """Flat key -> value map of the resolved configuration."""
        return {
            key: (str(value) if isinstance(value, Path) else value)
            for key, value in self.params.items()
        }

    def nested(self) -> dict:
        return nest_params(self.resolved())

    def with_overrides(self, overrides: Dict[str, object]) -> "ExperimentConfig":
        params = dict(self.params)
        for key, value in overrides.items():
            params[key] = coerce_value(key, value)
        return build_config(params, source=self.source)

    def write(self, path: Union[str, Path]):
        Path(path).write_text(format_key_values(self.resolved()))


def _resolve_schema(params: Dict[str, object]) -> DatasetSchema:
    if params["data.schema"] is not None:
        schema = read_schema(params["data.schema"])
        if params["data.name"] is not None and params["data.name"] != schema.name:
            logger.warning(
                f"data.name={params['data.name']} ignored, using schema file "
                f"{params['data.schema']} ('{schema.name}')"
            )
        return schema
    if params["data.name"] is None:
        raise ConfigError("Either data.name or data.schema must be set")
    try:
        return get_schema(params["data.name"])
    except SchemaError as e:
        raise ConfigError(str(e))


def build_config(params: Dict[str, object], source: Optional[Path] = None) -> ExperimentConfig:
    """Validate typed parameters and assemble the component configs."""
    params = {**default_params(), **params}
    unknown = set(params) - set(config_keys())
    if len(unknown) > 0:
        raise ConfigError(f"Unknown configuration keys: {sorted(unknown)}")

    schema = _resolve_schema(params)
    params["data.name"] = schema.name

    if params["data.path"] is None:
        raise ConfigError("data.path is required")
    data_path = Path(params["data.path"])
    if not data_path.is_file():
        raise ConfigError(f"Dataset file not found: {data_path}")

    stop_defaults = DATASET_STOP_DEFAULTS.get(schema.name, FALLBACK_STOP_DEFAULTS)
    for kw, val in stop_defaults.items():
        if params[f"stop.{kw}"] is None:
            params[f"stop.{kw}"] = val

    if params["out.dir"] is None:
        params["out.dir"] = Path("runs") / schema.name

    cfg = nest_params(params)
    net = NetworkConfig(
        input_dim=schema.input_dim,
        output_dim=schema.output_dim,
        hidden_units=cfg["net"]["hidden_units"],
        init_range=cfg["net"]["init_range"],
        seed=cfg["net"]["seed"]
    )
    train = TrainConfig(**cfg["train"])
    stop = StoppingCriteria(**cfg["stop"])
    new_unit = (
        NewUnitInit.zero()
        if cfg["net"]["new_unit"] == "zero"
        else NewUnitInit.random(net.init_range)
    )

    return ExperimentConfig(
        schema=schema,
        data_path=data_path,
        order=cfg["data"]["order"],
        net=net,
        train=train,
        stop=stop,
        new_unit=new_unit,
        out_dir=Path(cfg["out"]["dir"]),
        html=cfg["out"]["html"],
        params=params,
        source=source
    )


def load_config(
    path: Optional[Union[str, Path]] = None,
    overrides: Optional[Dict[str, object]] = None
) -> ExperimentConfig:
    """
    Read a configuration file and apply command-line overrides.

    Relative paths inside the file are taken relative to the file's
    directory; override values are used as given.
    """
    params = dict()
    if path is not None:
        path = Path(path)
        logger.info(f"Reading configuration from {path}")
        for key, value in read_key_values(path).items():
            params[key] = coerce_value(key, value, base_dir=path.parent)

    for key, value in (overrides or dict()).items():
        if value is None:
            continue
        params[key] = coerce_value(key, value)

    return build_config(params, source=path)


def describe_config(cfg: ExperimentConfig) -> str:
    """Multi-line listing of the resolved configuration, for the run log."""
    return "\n".join(
        f"  {key} = {value}"
        for key, value in flatten_params(cfg.nested()).items()
    )
