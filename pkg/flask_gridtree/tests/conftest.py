import pytest
from click.testing import CliRunner

from flask_gridtree.tests.tst_app import PRESETS_DIR, create_app


@pytest.fixture(scope='session')
def app(request):
    the_app = create_app()

    # Establish an application context before running the tests.
    ctx = the_app.app_context()
    ctx.push()

    def teardown():
        ctx.pop()

    request.addfinalizer(teardown)
    return the_app


@pytest.fixture(scope='session')
def manager(app):
    return app.gridtree_manager


@pytest.fixture(scope='function')
def runner():
    return CliRunner()


@pytest.fixture(scope='session')
def presets_dir():
    return PRESETS_DIR
