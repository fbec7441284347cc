import importlib
import inspect
import os
from fnmatch import fnmatch
from typing import Type, TypeVar

from .files import get_abs_path

T = TypeVar("T")


def command_module_name(command: str) -> str:
    # to-wick -> to_wick
    return command.strip().replace("-", "_")


def list_commands(folder: str = "python/tools") -> list[str]:
    abs_folder = get_abs_path(folder)
    names = sorted(f[:-3] for f in os.listdir(abs_folder) if f.endswith(".py") and not f.startswith("_"))
    return [n.replace("_", "-") for n in names if n != "unknown"]


def load_classes_from_folder(folder: str, name_pattern: str, base_class: Type[T], one_per_file: bool = True) -> list[Type[T]]:
    classes = []
    abs_folder = get_abs_path(folder)

    py_files = sorted(
        [file_name for file_name in os.listdir(abs_folder) if fnmatch(file_name, name_pattern) and file_name.endswith(".py")]
    )

    for file_name in py_files:
        module_name = file_name[:-3]
        module_path = folder.replace("/", ".") + "." + module_name
        module = importlib.import_module(module_path)

        class_list = inspect.getmembers(module, inspect.isclass)

        # iterate backwards to skip imported superclasses
        for cls in reversed(class_list):
            if cls[1] is not base_class and issubclass(cls[1], base_class) and cls[1].__module__ == module.__name__:
                classes.append(cls[1])
                if one_per_file:
                    break

    return classes
