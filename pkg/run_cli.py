import asyncio
import sys
from typing import Sequence

from initialize import initialize_config
from python.calculus.grids import GridSpec
from python.helpers import extract_tools, runtime
from python.helpers.errors import FockCalcError, error_text, exit_code, format_error
from python.helpers.print_style import PrintStyle
from python.helpers.tool import Response, Tool


def get_tool(command: str | None, args: dict, config) -> Tool:
    from python.tools.unknown import Unknown

    name = extract_tools.command_module_name(command or "")
    known = name.replace("_", "-") in extract_tools.list_commands()
    classes = extract_tools.load_classes_from_folder("python/tools", name + ".py", Tool) if known else []
    tool_class = classes[0] if classes else Unknown
    return tool_class(name=command or "", args=args, config=config)


def _flag_overrides(args: dict) -> dict:
    overrides = {
        "seed": args.get("seed"),
        "quad_tol": args.get("tol"),
        "debug": True if args.get("debug") else None,
    }
    cutoffs = runtime.parse_int_list(args.get("cutoffs"))
    if cutoffs:
        overrides["garding_cutoffs"] = tuple(cutoffs)
    if args.get("grid"):
        grid = GridSpec.parse(args["grid"])
        overrides.update(grid_r_min=grid.r_min, grid_r_max=grid.r_max, grid_radial=grid.radial, grid_angular=grid.angular)
    return overrides


async def run_command(argv: Sequence[str] | None = None) -> int:
    args = runtime.initialize(argv)
    config = initialize_config(args.get("config"), **_flag_overrides(args))
    tool = get_tool(args.get("command"), args, config)

    await tool.before_execution()
    response: Response = await tool.execute()
    await tool.after_execution(response)
    return response.exit_code


def run(argv: Sequence[str] | None = None) -> int:
    try:
        return asyncio.run(run_command(argv))
    except FockCalcError as e:
        PrintStyle.error(error_text(e))
        return exit_code(e)
    except Exception as e:
        PrintStyle.error(format_error(e))
        return exit_code(e)


if __name__ == "__main__":
    sys.exit(run())
