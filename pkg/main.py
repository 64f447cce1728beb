"""Entry point for the command-line tool."""
from kgring.main import cli

if __name__ == '__main__':
    cli()
