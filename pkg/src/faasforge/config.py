"""Shared configuration for the command line tools.

Settings come from an optional JSON or YAML file plus ``FAASFORGE_*``
environment variables; the environment wins wherever both speak.  The file
has three optional sections::

    provider:
      kind: mock            # or live
      endpoint: https://...
      model: gpt-4o
      temperature: 0.7
      max_tokens: 1500
      timeout: 60.0
      api_key_env: OPENAI_API_KEY
      fixtures_path: fixtures.json
      seed: 0
      delay: 0.0
    platform:
      host: 127.0.0.1
      port: 0
      adapters: [python3, nodejs]
      deploy_timeout: 30.0
      invocation_timeout: 10.0
      work_dir: /tmp/forge
    prompt_template: my_template.txt

API keys never live in the file, only the *name* of the variable that holds
one.  ``build_provider`` and ``build_platform`` turn validated settings into
live objects.
"""

import dataclasses
import json
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Optional, Tuple

import yaml

from .llm import LLMConfig, LiveClient, MockProvider, Provider
from .platform import Platform, default_adapters

CONFIG_PATH_VAR = "FAASFORGE_CONFIG"

_ENV_PREFIX = "FAASFORGE_"


class ConfigError(Exception):
    """Configuration file or environment override is unusable."""


@dataclass(frozen=True)
class ProviderSettings:
    kind: str = "mock"
    endpoint: str = "https://api.openai.com/v1/chat/completions"
    model: str = "gpt-4o"
    temperature: float = 0.7
    max_tokens: int = 1500
    timeout: float = 60.0
    api_key_env: str = "OPENAI_API_KEY"
    fixtures_path: Optional[str] = None
    seed: int = 0
    delay: Optional[float] = None

    def validate(self) -> None:
        # fixtures_path is checked in build_provider; commands that never
        # talk to a provider must load fine without one.
        if self.kind not in ("mock", "live"):
            raise ConfigError(f"provider.kind must be 'mock' or 'live', not {self.kind!r}")


@dataclass(frozen=True)
class PlatformSettings:
    host: str = "127.0.0.1"
    port: int = 0
    adapters: Optional[Tuple[str, ...]] = None
    deploy_timeout: float = 30.0
    invocation_timeout: float = 10.0
    work_dir: Optional[str] = None

    def validate(self) -> None:
        if not 0 <= self.port <= 65535:
            raise ConfigError(f"platform.port {self.port} outside [0, 65535]")
        if self.deploy_timeout <= 0 or self.invocation_timeout <= 0:
            raise ConfigError("platform timeouts must be positive")
        if self.adapters is not None:
            known = set(default_adapters())
            unknown = [name for name in self.adapters if name not in known]
            if unknown:
                raise ConfigError(
                    f"platform.adapters names unknown runtimes: {', '.join(unknown)}"
                )


@dataclass(frozen=True)
class AppConfig:
    provider: ProviderSettings = ProviderSettings()
    platform: PlatformSettings = PlatformSettings()
    prompt_template: Optional[str] = None

    def validate(self) -> None:
        self.provider.validate()
        self.platform.validate()
        if self.prompt_template is not None and not Path(self.prompt_template).is_file():
            raise ConfigError(f"prompt_template file not found: {self.prompt_template}")


def _coerce(value: str, target_type) -> object:
    if target_type is float:
        return float(value)
    if target_type is int:
        return int(value)
    return value


def _section(doc: dict, name: str) -> dict:
    section = doc.get(name, {})
    if section is None:
        return {}
    if not isinstance(section, dict):
        raise ConfigError(f"section {name!r} must be a mapping")
    return section


def _build_settings(cls, section: dict, label: str):
    fields = {f.name: f for f in dataclasses.fields(cls)}
    unknown = sorted(set(section) - set(fields))
    if unknown:
        raise ConfigError(f"unknown {label} settings: {', '.join(unknown)}")
    kwargs = {}
    for key, value in section.items():
        if key == "adapters":
            if not isinstance(value, (list, tuple)):
                raise ConfigError("platform.adapters must be a list of runtime names")
            kwargs[key] = tuple(str(v) for v in value)
        else:
            kwargs[key] = value
    try:
        return cls(**kwargs)
    except (TypeError, ValueError) as err:
        raise ConfigError(f"bad {label} settings: {err}") from err


def _read_file(path: Path) -> dict:
    try:
        raw = path.read_text(encoding="utf-8")
    except OSError as err:
        raise ConfigError(f"cannot read config file {path}: {err}") from err
    try:
        if path.suffix in (".yaml", ".yml"):
            doc = yaml.safe_load(raw)
        else:
            doc = json.loads(raw)
    except (json.JSONDecodeError, yaml.YAMLError) as err:
        raise ConfigError(f"config file {path} is not valid: {err}") from err
    if doc is None:
        return {}
    if not isinstance(doc, dict):
        raise ConfigError(f"config file {path} must hold a mapping at the top level")
    return doc


# Environment variable -> (section, field, type).  Strings pass through as-is.
_ENV_OVERRIDES = {
    "PROVIDER": ("provider", "kind", str),
    "ENDPOINT": ("provider", "endpoint", str),
    "MODEL": ("provider", "model", str),
    "TEMPERATURE": ("provider", "temperature", float),
    "MAX_TOKENS": ("provider", "max_tokens", int),
    "TIMEOUT": ("provider", "timeout", float),
    "API_KEY_ENV": ("provider", "api_key_env", str),
    "FIXTURES": ("provider", "fixtures_path", str),
    "SEED": ("provider", "seed", int),
    "HOST": ("platform", "host", str),
    "PORT": ("platform", "port", int),
    "ADAPTERS": ("platform", "adapters", str),
    "DEPLOY_TIMEOUT": ("platform", "deploy_timeout", float),
    "INVOCATION_TIMEOUT": ("platform", "invocation_timeout", float),
    "WORK_DIR": ("platform", "work_dir", str),
    "PROMPT_TEMPLATE": (None, "prompt_template", str),
}


def _apply_env(doc: dict, environ: Dict[str, str]) -> dict:
    merged = {name: dict(_section(doc, name)) for name in ("provider", "platform")}
    top: Dict[str, object] = {}
    for suffix, (section, field, target_type) in _ENV_OVERRIDES.items():
        value = environ.get(_ENV_PREFIX + suffix)
        if value is None:
            continue
        try:
            parsed = _coerce(value, target_type)
        except ValueError as err:
            raise ConfigError(f"bad value for {_ENV_PREFIX + suffix}: {err}") from err
        if field == "adapters":
            parsed = [name.strip() for name in value.split(",") if name.strip()]
        if section is None:
            top[field] = parsed
        else:
            merged[section][field] = parsed
    result = dict(doc)
    result.update(merged)
    result.update(top)
    return result


def load_config(path: Optional[str] = None, environ: Optional[Dict[str, str]] = None) -> AppConfig:
    """Load settings from ``path`` (or $FAASFORGE_CONFIG) plus env overrides.

    With no file and no overrides this returns pure defaults, which is the
    normal case for local mock runs.
    """
    environ = dict(os.environ if environ is None else environ)
    if path is None:
        path = environ.get(CONFIG_PATH_VAR)
    doc = _read_file(Path(path)) if path else {}

    known_top = {"provider", "platform", "prompt_template"}
    unknown = sorted(set(doc) - known_top)
    if unknown:
        raise ConfigError(f"unknown config sections: {', '.join(unknown)}")

    doc = _apply_env(doc, environ)
    provider = _build_settings(ProviderSettings, _section(doc, "provider"), "provider")
    platform = _build_settings(PlatformSettings, _section(doc, "platform"), "platform")
    template = doc.get("prompt_template")
    if template is not None and not isinstance(template, str):
        raise ConfigError("prompt_template must be a file path")

    config = AppConfig(provider=provider, platform=platform, prompt_template=template)
    config.validate()
    return config


def build_provider(settings: ProviderSettings) -> Provider:
    settings.validate()
    if settings.kind == "mock":
        if not settings.fixtures_path:
            raise ConfigError("mock provider requires provider.fixtures_path")
        try:
            return MockProvider.from_file(
                settings.fixtures_path, seed=settings.seed, synthetic_delay=settings.delay
            )
        except (OSError, ValueError, KeyError, TypeError) as err:
            raise ConfigError(
                f"cannot load mock fixtures from {settings.fixtures_path}: {err}"
            ) from err
    return LiveClient(
        LLMConfig(
            endpoint_url=settings.endpoint,
            model_id=settings.model,
            temperature=settings.temperature,
            max_tokens=settings.max_tokens,
            request_timeout=settings.timeout,
            api_key_env_var=settings.api_key_env,
        )
    )


def build_platform(settings: PlatformSettings) -> Platform:
    settings.validate()
    adapters = default_adapters()
    if settings.adapters is not None:
        adapters = {name: adapters[name] for name in settings.adapters}
    return Platform(
        adapters,
        work_dir=settings.work_dir,
        deploy_timeout=settings.deploy_timeout,
        invocation_timeout=settings.invocation_timeout,
    )


def read_prompt_template(config: AppConfig) -> Optional[str]:
    """Template text from the configured path, or None for the built-in."""
    if config.prompt_template is None:
        return None
    try:
        return Path(config.prompt_template).read_text(encoding="utf-8")
    except OSError as err:
        raise ConfigError(f"cannot read prompt template: {err}") from err
