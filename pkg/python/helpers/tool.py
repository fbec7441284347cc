import json
import os
import sys
from abc import abstractmethod
from dataclasses import dataclass
from typing import Any

from initialize import CalculusConfig
from python.calculus.symalg import PolySymbol, symbol_from_json
from python.helpers import files
from python.helpers.errors import MalformedInputError
from python.helpers.print_style import PrintStyle


@dataclass
class Response:
    message: str
    exit_code: int = 0
    payload: Any = None  # dict/list -> JSON, str -> written verbatim


class Tool:

    def __init__(self, name: str, args: dict[str, Any], config: CalculusConfig, **kwargs) -> None:
        self.name = name
        self.args = args
        self.config = config

    @abstractmethod
    async def execute(self, **kwargs) -> Response:
        pass

    async def before_execution(self, **kwargs):
        PrintStyle(font_color="#1B4F72", padding=True, background_color="white", bold=True).print(f"fockcalc: running '{self.name}'")
        shown = {k: v for k, v in self.args.items() if k != "command" and v not in (None, False)}
        for key, value in shown.items():
            PrintStyle(font_color="#85C1E9", bold=True).stream(self.nice_key(key) + ": ")
            PrintStyle(font_color="#85C1E9").stream(str(value))
            PrintStyle().print()

    async def after_execution(self, response: Response, **kwargs):
        if response.payload is not None:
            self.write_payload(response.payload)
        if response.exit_code == 0:
            PrintStyle.success(f"{self.name}: {response.message}")
        else:
            PrintStyle.warning(f"{self.name}: {response.message}")

    def write_payload(self, payload: Any):
        text = payload if isinstance(payload, str) else files.dumps_json(payload) + "\n"
        out = self.args.get("out")
        if out:
            files.write_file(os.path.abspath(out), text)
            PrintStyle.info(f"wrote {out}")
        else:
            sys.stdout.write(text)
            sys.stdout.flush()

    def arg(self, key: str, default: Any = None) -> Any:
        value = self.args.get(key)
        return default if value is None else value

    def read_json_arg(self, key: str) -> Any:
        path = self.args.get(key)
        if not path:
            raise MalformedInputError(f"'{self.name}' needs --{key.replace('_', '-')}")
        try:
            return files.read_json(os.path.abspath(path))
        except OSError as e:
            raise MalformedInputError(f"cannot read {path}: {e}") from e
        except json.JSONDecodeError as e:
            raise MalformedInputError(f"{path} is not valid JSON: {e}") from e

    def load_symbol(self, key: str = "sym", kind: str | None = None) -> PolySymbol:
        data = self.read_json_arg(key)
        if isinstance(data, dict) and "kind" not in data and self.args.get("kind"):
            data = {**data, "kind": self.args["kind"]}
        return symbol_from_json(data, kind)

    def nice_key(self, key: str):
        words = key.split("_")
        words = [words[0].capitalize()] + [word.lower() for word in words[1:]]
        return " ".join(words)
