import os

import pytest

from flask_gridtree import TraceError, TraceTable, read_traces
from flask_gridtree.traces import write_traces


def write(tmpdir, text):
    path = os.path.join(str(tmpdir), 'trace.csv')
    with open(path, 'w') as f:
        f.write(text)
    return path


def test_read_traces(tmpdir):
    path = write(tmpdir, 'node_id,x,y,t,value\n'
                         '1,1.0,2.0,0,10.5\n'
                         '2,3.0,4.0,0,20\n'
                         '\n'
                         '2,3.0,4.0,1,21\n'
                         '1,1.0,2.0,1,11\n')
    traces = read_traces(path)
    assert traces.ticks == 2
    assert traces.node_ids == (1, 2)
    assert traces.positions[2] == (3.0, 4.0)
    assert traces.values[1] == (10.5, 11.0)
    assert traces.value(2, 1) == 21.0
    with pytest.raises(TraceError):
        traces.value(2, 2)


def test_write_then_read(tmpdir):
    table = TraceTable.from_rows([(1, 0.5, 0.25, 0, 1.0 / 3.0), (1, 0.5, 0.25, 1, 2.0)])
    path = os.path.join(str(tmpdir), 'out.csv')
    write_traces(path, table)
    again = read_traces(path)
    assert again.values == table.values
    assert again.positions == table.positions


@pytest.mark.parametrize('text', [
    '',
    'id,x,y,t,value\n1,0,0,0,1\n',
    'node_id,x,y,t,value\n1,0,0,0\n',
    'node_id,x,y,t,value\n1,0,0,zero,1\n',
    'node_id,x,y,t,value\n1,0,0,0,1\n1,5,5,1,1\n',     # node moves
    'node_id,x,y,t,value\n1,0,0,0,1\n1,0,0,0,2\n',     # two readings for one tick
    'node_id,x,y,t,value\n1,0,0,0,1\n2,1,1,1,1\n',     # node 1 misses tick 1, node 2 tick 0
    'node_id,x,y,t,value\n1,0,0,-1,1\n',
    'node_id,x,y,t,value\n',
])
def test_malformed_traces(tmpdir, text):
    with pytest.raises(TraceError):
        read_traces(write(tmpdir, text))


def test_missing_trace_file(tmpdir):
    with pytest.raises(TraceError) as excinfo:
        read_traces(os.path.join(str(tmpdir), 'nope.csv'))
    assert 'Trace file not found' in str(excinfo.value)
