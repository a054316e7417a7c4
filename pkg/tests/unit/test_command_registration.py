"""
Unit tests for command registration and routing.
"""
import io

import pytest

from config import load_settings
from core.command_registry import CommandRegistry, registry
from core.command_router import CommandRouter
from core.commands import COMMAND_MODULES, load_commands
from core.commands.base import DEVELOPER, PROVIDER, BaseCommand
from core.error_handler import ConfigurationError, ErrorHandler, SingularMatrix, ValidationError


class EchoCommand(BaseCommand):
    """Command that records its arguments."""

    def __init__(self, name='echo', persona=DEVELOPER, fail=None):
        super().__init__(name=name, description="Echo a value", persona=persona)
        self.fail = fail
        self.seen = None

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--value', type=int, required=True)

    def pre_execute(self, args, settings):
        if args.value < 0:
            raise ValidationError("value must be non-negative")

    def execute(self, args, settings):
        if self.fail:
            raise self.fail
        self.seen = args.value
        return 0


@pytest.mark.unit
class TestCommandRegistration:
    """Test suite for command registration functionality."""

    def test_command_registration(self):
        """Registered commands are found by name and grouped by persona."""
        # Setup
        local = CommandRegistry()
        command = EchoCommand()

        # Test
        local.register_command(command)

        # Verify
        assert list(local) == [command]
        assert local.command_groups[DEVELOPER] == [command]
        assert len(local) == 1

    def test_duplicate_command_registration(self):
        """Duplicate names are rejected."""
        local = CommandRegistry()
        local.register_command(EchoCommand())
        with pytest.raises(ConfigurationError, match="already registered"):
            local.register_command(EchoCommand())

    def test_toolkit_commands(self):
        """Every command module registers exactly one command."""
        load_commands()
        names = {c.name for c in registry}
        assert names == {
            'keygen', 'morph', 'unmorph', 'build-augconv',
            'kernels', 'conv-matrix', 'apply', 'attack', 'analyze',
        }
        assert len(registry) == len(COMMAND_MODULES)

    def test_only_provider_commands_read_the_secret(self):
        """The secret is opened by provider commands only."""
        load_commands()
        readers = registry.secret_readers()
        assert readers == ['build-augconv', 'keygen', 'morph', 'unmorph']
        assert all(c.persona == PROVIDER for c in registry if c.name in readers)


@pytest.mark.unit
class TestCommandRouter:
    """Test suite for argument parsing and dispatch."""

    @pytest.fixture
    def echo(self):
        return EchoCommand()

    @pytest.fixture
    def router(self, echo):
        local = CommandRegistry()
        local.register_command(echo)
        local.register_command(EchoCommand('crash', fail=SingularMatrix("singular")))
        return CommandRouter(local, load_settings(), ErrorHandler(stream=io.StringIO()))

    def test_dispatch(self, router, echo):
        assert router.dispatch(['echo', '--value', '3']) == 0
        assert echo.seen == 3

    def test_missing_flag_is_usage_error(self, router):
        assert router.dispatch(['echo']) == 2

    def test_unknown_command(self, router):
        assert router.dispatch(['nope']) == 2

    def test_help_exits_zero(self, router, capsys):
        assert router.dispatch(['--help']) == 0
        assert 'echo' in capsys.readouterr().out

    def test_validation_error(self, router):
        assert router.dispatch(['echo', '--value', '-1']) == 2

    def test_runtime_error(self, router):
        assert router.dispatch(['crash', '--value', '1']) == 1

    def test_providers_listed_first(self):
        local = CommandRegistry()
        local.register_command(EchoCommand('echo-dev'))
        local.register_command(EchoCommand('echo-prov', PROVIDER))
        usage = CommandRouter(local, load_settings()).build_parser().format_help()
        assert usage.index('echo-prov') < usage.index('echo-dev')
