import numpy as np
import pytest
from MeshFlow.builders import File, Folder, JSON
from MeshFlow.core import (
    seeds, MeshFlowError, MeshFormatError, GeometryError, ShapeMismatchError,
    ConfigError, CheckpointError, TapeError, DivergenceError
)
from MeshFlow.stores import LossTrace, Subscribeable
from MeshFlow.typing import privatemethod
from MeshFlow.utils import Source

def test_stream_is_reproducible_and_streams_differ():
    a = seeds.stream(3, seeds.MESH_PASS, 5).random(4)
    b = seeds.stream(3, seeds.MESH_PASS, 5).random(4)
    c = seeds.stream(3, seeds.MESH_PASS, 6).random(4)
    d = seeds.stream(3, seeds.POINT_PASS, 5).random(4)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)
    assert not np.array_equal(a, d)

@pytest.mark.parametrize('left, right', [
    ((seeds.TEMPLATES,), (seeds.TEMPLATES, 0)),
    ((seeds.TEMPLATES, 0), (seeds.TEMPLATES, 0, 0)),
    ((seeds.INIT,), (seeds.INIT, 0)),
    ((seeds.MESH_PASS, 1), (seeds.MESH_PASS, 1, 0)),
])
def test_trailing_zero_words_give_distinct_streams(left, right):
    assert not np.array_equal(seeds.stream(3, *left).random(4), seeds.stream(3, *right).random(4))

def test_large_seeds_do_not_collide_with_stream_words():
    assert not np.array_equal(seeds.stream(2 ** 32, 0).random(4), seeds.stream(0, 1).random(4))

@pytest.mark.parametrize('error, builtin', [
    (MeshFormatError, ValueError),
    (GeometryError, ValueError),
    (ShapeMismatchError, ValueError),
    (ConfigError, ValueError),
    (CheckpointError, ValueError),
    (TapeError, RuntimeError),
    (DivergenceError, ArithmeticError),
])
def test_errors_derive_from_package_base_and_builtin(error, builtin):
    assert issubclass(error, MeshFlowError)
    assert issubclass(error, builtin)

def test_exit_codes():
    assert MeshFormatError('x').exitCode == 1
    assert DivergenceError('x', trace=[1]).exitCode == 2
    assert ConfigError('bad', lineNumber=4).lineNumber == 4

def test_file_lines(tmp_path):
    path = tmp_path / 'a.txt'
    File(path).writeLines(['one', 'two'])
    assert path.read_text() == 'one\ntwo\n'
    assert File(path).readFile(lines=True) == ['one', 'two']

def test_file_missing(tmp_path):
    with pytest.raises(FileNotFoundError):
        File(tmp_path / 'missing.obj').readFile()

def test_folder_lists_matching_files_by_name(tmp_path):
    for name in ('b.obj', 'a.OBJ', 'c.xyz'):
        (tmp_path / name).write_text('')
    (tmp_path / 'sub.obj').mkdir()
    names = [path.rsplit('/', 1)[-1] for path in Folder(tmp_path).listFiles('*.obj')]
    assert names == ['a.OBJ', 'b.obj']

def test_json_line_keeps_key_order():
    assert JSON.line({'b': 1, 'a': None, 'c': False}) == '{"b": 1, "a": null, "c": false}'

def test_json_get_dotted(tmp_path):
    document = JSON(tmp_path / 'doc.json')
    document.write({'outer': {'inner': 3}})
    assert JSON(tmp_path / 'doc.json').get('outer.inner') == 3
    assert JSON(tmp_path / 'doc.json').get('outer.missing', 'none') == 'none'

class Counter:
    def __init__(self):
        self.count = 0

    @privatemethod
    def bump(self):
        self.count += 1

    def run(self):
        self.bump()

def test_private_method_only_from_same_instance():
    counter = Counter()
    counter.run()
    assert counter.count == 1
    with pytest.raises(PermissionError):
        counter.bump()

def test_subscribers_see_values_and_failures_are_contained():
    seen = []
    store = Subscribeable(0)
    store.subscribe(lambda value: 1 / 0)
    store.subscribe(seen.append)
    store.value = 5
    assert seen == [5]
    assert store.value == 5

def test_subscribers_can_thin_out_and_cancel():
    store = Subscribeable()
    every, thinned = [], []
    cancel = store.subscribe(every.append)
    store.subscribe(thinned.append, every=2)
    for k in range(1, 6):
        store.publish(k)
        if k == 3:
            cancel()
    assert every == [1, 2, 3]
    assert thinned == [2, 4]
    assert store.published == 5
    with pytest.raises(ValueError):
        store.subscribe(print, every=0)

def test_loss_trace_rows_and_csv():
    trace = LossTrace(['cd', 'lap'])
    seen = []
    trace.subscribe(seen.append)
    trace.append(0, {'cd': 2.0}, 2.0)
    trace.append(1, {'cd': 0.5, 'lap': 0.25}, 0.75)
    trace.append(2, {'cd': 0.5, 'lap': 0.25}, 0.75)

    assert len(seen) == 3
    assert trace.best().step == 1
    assert trace.toCsv() == [
        'step,cd,lap,total',
        '0,2.0,0.0,2.0',
        '1,0.5,0.25,0.75',
        '2,0.5,0.25,0.75',
    ]

def test_loss_trace_best_needs_a_finite_row():
    trace = LossTrace(['cd'])
    trace.append(0, {}, float('nan'))
    with pytest.raises(ValueError):
        trace.best()

def test_source_relative_to_anchor(tmp_path):
    anchor = tmp_path / 'data' / 'pairs.tsv'
    assert Source.relativeTo('meshes/a.obj', anchor).path() == (tmp_path / 'data' / 'meshes' / 'a.obj').resolve()
    assert Source.relativeTo('/abs/b.obj', anchor).get() == '/abs/b.obj'
