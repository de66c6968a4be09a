from fabric.api import task
from fabric.operations import local


@task
def runapp(appname):
    local('PYTHONPATH=. python example_apps/'+appname+'.py')

@task
def table3():
    # Normal vs. dedup energy on the bundled five-node preset
    local('PYTHONPATH=. python -m flask_gridtree.cli --config flask_gridtree/presets/table3.cfg compare-dedup')

@task
def test():
    # Requires "pip install pytest"
    local('py.test flask_gridtree/tests/')

@task
def cov():
    # Requires "pip install pytest-cov"
    local('py.test --cov flask_gridtree --cov-report term-missing flask_gridtree/tests/')

@task
def docs(rebuild=False):
    options=''
    if rebuild:
        options += ' -E'
    local('sphinx-build -b html -a {options} docs/source ../builds/flask_gridtree/docs'.format(options=options))

@task
def tox():
    local('tox')

@task
def build_dist():
    local('rm -f dist/*')
    local('python setup.py sdist')

@task
def upload_to_pypi():
    build_dist()
    local('twine upload dist/*')
