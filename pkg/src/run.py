import sys

import click

from bench.commands import cli
from common.exc import CampcException, ExitCode


def main() -> int:
    try:
        code = cli.main(standalone_mode=False)
    except click.exceptions.Exit as e:
        return e.exit_code
    except click.ClickException as e:
        e.show()
        return ExitCode.USAGE
    except click.Abort:
        click.echo('Aborted!', err=True)
        return ExitCode.USAGE
    except CampcException as e:
        click.echo(f'Error: {e}', err=True)
        return e.exit_code
    return code if isinstance(code, int) else ExitCode.OK


if __name__ == '__main__':
    sys.exit(main())
