from python.helpers import extract_tools
from python.helpers.tool import Response, Tool


class Unknown(Tool):
    async def execute(self, **kwargs):
        commands = ", ".join(extract_tools.list_commands())
        what = f"unknown command '{self.name}'" if self.name else "no command given"
        return Response(message=f"{what}; available: {commands}", exit_code=1)

    async def before_execution(self, **kwargs):
        pass
