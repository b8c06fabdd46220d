import numpy as np
import pytest
from MeshFlow.core import ConfigError, MeshFormatError, DivergenceError
from MeshFlow.modules.mesh import loadMesh, loadPoints, saveMesh
from MeshFlow.cli import RunConfig, parseConfig, loadConfig, schemaLines, readManifest, parseTimes, main
from MeshFlow.cli.commands import Commands

SMALL = [
    'meshSamples = 48',
    'pointSamples = 48',
    'encodeSamples = 48',
    'evalSamples = 48',
    'templateSamples = 48',
    'voxelResolution = 8',
    'encoderWidths = 8, 16',
    'decoderWidths = 16',
]

@pytest.fixture
def workspace(tmp_path, square, tetrahedron, cube):
    saveMesh(square, tmp_path / 'square.obj')
    saveMesh(square.withVertices(square.vertices + np.array([0.0, 0.0, 0.2])), tmp_path / 'lifted.obj')
    saveMesh(tetrahedron, tmp_path / 'tetrahedron.obj')
    saveMesh(cube, tmp_path / 'cube.obj')
    return tmp_path

def writeConfig(folder, *extra):
    path = folder / 'run.cfg'
    path.write_text('\n'.join(SMALL + list(extra)) + '\n')
    return str(path)

def test_config_entries_override_defaults():
    config = parseConfig(['# weights', 'lap = 0.5', '', 'resample = off', 'encoderWidths = 4,8', 'plane = xy  # mirror z'])
    assert config.lap == 0.5
    assert config.resample is False
    assert config.encoderWidths == (4, 8)
    assert config.plane == 'xy'
    assert config.iterations == RunConfig().iterations
    assert config.architecture().decoderWidths == (512, 256, 3)

@pytest.mark.parametrize('lines, lineNumber', [
    (['lap = 1', 'bogus = 2'], 2),
    (['iterations = -1'], 1),
    (['', 'seed = 1', 'seed = 2'], 3),
    (['stepSize = 0'], 1),
    (['plane = ab'], 1),
    (['resample = maybe'], 1),
    (['just words'], 1),
    (['lap = nan'], 1),
])
def test_config_errors_carry_the_line(lines, lineNumber):
    with pytest.raises(ConfigError) as info:
        parseConfig(lines)
    assert info.value.lineNumber == lineNumber

def test_ablation_switches_a_weight_off():
    assert parseConfig(['ablation = laplacian']).weights().lap == 0.0

def test_config_file(tmp_path):
    path = tmp_path / 'a.cfg'
    path.write_text('seed = 9\n')
    assert loadConfig(path).seed == 9
    assert RunConfig().withSeed(4).seed == 4
    with pytest.raises(ConfigError):
        RunConfig().withSeed(-1)

def test_schema_lists_every_key():
    lines = schemaLines()
    names = [line.split('\t')[0] for line in lines]
    assert names == list(RunConfig.__dataclass_fields__)
    assert all(len(line.split('\t')) == 5 for line in lines)

def test_manifest(tmp_path):
    path = tmp_path / 'pairs.tsv'
    path.write_text('# source\ttarget\n\na.obj\tb.xyz\n/abs/c.obj\td.obj\n')
    pairs = readManifest(path)
    assert [(s.get(), t.get()) for s, t in pairs] == [
        (str(tmp_path.resolve() / 'a.obj'), str(tmp_path.resolve() / "b.xyz")),
        ('/abs/c.obj', str(tmp_path.resolve() / "d.obj")),
    ]

@pytest.mark.parametrize('text, lineNumber', [('a.obj b.obj\n', 1), ('x\ty\n\nonly\n', 3), ('# empty\n', None)])
def test_bad_manifests(tmp_path, text, lineNumber):
    path = tmp_path / 'pairs.tsv'
    path.write_text(text)
    with pytest.raises(MeshFormatError) as info:
        readManifest(path)
    assert info.value.lineNumber == lineNumber

def test_interpolation_weights():
    assert parseTimes('0, 0.5,1') == [0.0, 0.5, 1.0]
    with pytest.raises(ValueError):
        parseTimes('0,1.5')
    with pytest.raises(ValueError):
        parseTimes('half')

def test_schema_flag(capsys):
    assert main(['--print-config-schema']) == 0
    assert 'cdMesh\tfloat\t1.0' in capsys.readouterr().out

def test_usage_errors_exit_with_one(capsys):
    assert main([]) == 1
    assert main(['frobnicate']) == 1
    assert main(['sample']) == 1
    assert 'error' in capsys.readouterr().err

def test_missing_input_exits_with_one(workspace):
    assert main(['eval', str(workspace / 'nothing.obj'), str(workspace / 'cube.obj')]) == 1

def test_sample(workspace):
    out = workspace / 'cube.xyz'
    assert main(['sample', str(workspace / 'cube.obj'), '--count', '100', '--out', str(out), '--seed', '3']) == 0
    first = loadPoints(out).points
    assert first.shape == (100, 3)
    assert np.all(np.abs(first) <= 0.5 + 1e-12)
    main(['sample', str(workspace / 'cube.obj'), '-n', '100', '-o', str(out), '--seed', '3'])
    assert np.array_equal(loadPoints(out).points, first)

def test_eval(workspace, capsys):
    cube = str(workspace / 'cube.obj')
    assert main(['eval', cube, cube, '--config', writeConfig(workspace)]) == 0
    assert capsys.readouterr().out.strip() == '{"cd": 0.0, "emd": 0.0, "iou": 1.0, "leak": false}'
    assert main(['eval', cube, cube, '--csv', '--config', writeConfig(workspace)]) == 0
    assert capsys.readouterr().out.splitlines() == ['cd,emd,iou,leak', '0.0,0.0,1.0,0']

def test_direct_deformation(workspace, capsys):
    out = workspace / 'out' / 'direct.obj'
    out.parent.mkdir()
    config = writeConfig(workspace, 'iterations = 3', 'stepSize = 0.01')
    code = main(['deform', str(workspace / 'square.obj'), str(workspace / 'lifted.obj'), '--mode', 'direct',
                 '--out', str(out), '--config', config])
    assert code == 0
    assert loadMesh(out).vertexCount == 4
    trace = (workspace / 'out' / 'direct.trace.csv').read_text().splitlines()
    assert trace[0] == 'step,cdMesh,emdMesh,cdPoints,emdPoints,sym,lap,lpi,total'
    assert len(trace) == 5
    metrics = (workspace / 'out' / 'direct.metrics.json').read_text().strip()
    assert capsys.readouterr().out.strip() == metrics

def test_network_deformation_needs_a_checkpoint(workspace):
    code = main(['deform', str(workspace / 'square.obj'), str(workspace / 'lifted.obj'), '--mode', 'network',
                 '--out', str(workspace / 'net.obj')])
    assert code == 1
    assert not (workspace / 'net.obj').exists()

def test_train_then_deform_and_interpolate(workspace):
    (workspace / 'pairs.tsv').write_text('square.obj\tlifted.obj\nsquare.obj\tcube.obj\n')
    config = writeConfig(workspace, 'trainSteps = 3', 'learningRate = 0.001')
    checkpoint = workspace / 'model.json'
    assert main(['train', str(workspace / 'pairs.tsv'), '--out', str(checkpoint), '--config', config]) == 0
    assert checkpoint.exists()
    assert (workspace / 'model.epoch1.json').exists()
    assert (workspace / 'model.epoch2.json').exists()
    assert len((workspace / 'model.trace.csv').read_text().splitlines()) == 4

    deformed = workspace / 'net.obj'
    code = main(['deform', str(workspace / 'square.obj'), str(workspace / 'lifted.obj'), '--mode', 'network',
                 '--checkpoint', str(checkpoint), '--out', str(deformed), '--config', config])
    assert code == 0

    frames = workspace / 'frames'
    code = main(['interp', str(workspace / 'square.obj'), str(workspace / 'lifted.obj'), str(workspace / 'cube.obj'),
                 '--t', '0,0.5,1', '--checkpoint', str(checkpoint), '--out', str(frames), '--config', config])
    assert code == 0
    assert sorted(path.name for path in frames.iterdir()) == ['000_t0.obj', '001_t0.5.obj', '002_t1.obj']
    assert np.array_equal(loadMesh(frames / '000_t0.obj').vertices, loadMesh(deformed).vertices)

def test_interpolation_rejects_weights_before_writing(workspace):
    frames = workspace / 'frames'
    code = main(['interp', str(workspace / 'square.obj'), str(workspace / 'lifted.obj'), str(workspace / 'cube.obj'),
                 '--t', '0,1.5', '--checkpoint', str(workspace / 'missing.json'), '--out', str(frames)])
    assert code == 1
    assert not frames.exists()

def test_select_template_by_chamfer(workspace, capsys):
    library = workspace / 'library'
    library.mkdir()
    for name in ('cube', 'tetrahedron', 'square'):
        (library / f'{name}.obj').write_text((workspace / f'{name}.obj').read_text())
    code = main(['select-template', str(workspace / 'tetrahedron.obj'), str(library), '--mode', 'chamfer',
                 '--config', writeConfig(workspace)])
    assert code == 0
    index, path = capsys.readouterr().out.strip().split('\t')
    assert index == '2'
    assert path.endswith('tetrahedron.obj')

def test_select_template_by_embedding(workspace, capsys):
    library = workspace / 'library'
    library.mkdir()
    for name in ('cube', 'tetrahedron'):
        (library / f'{name}.obj').write_text((workspace / f'{name}.obj').read_text())
    config = writeConfig(workspace, 'autoencoderSteps = 2')
    encoder = workspace / 'encoder.json'
    code = main(['select-template', str(workspace / 'cube.obj'), str(library), '--mode', 'embedding',
                 '--encoder-out', str(encoder), '--config', config])
    assert code == 0
    assert encoder.exists()
    first = capsys.readouterr().out
    code = main(['select-template', str(workspace / 'cube.obj'), str(library), '--checkpoint', str(encoder),
                 '--config', config])
    assert code == 0
    assert capsys.readouterr().out == first

def test_empty_template_folder(workspace):
    (workspace / 'empty').mkdir()
    assert main(['select-template', str(workspace / 'cube.obj'), str(workspace / 'empty'), '--mode', 'chamfer']) == 1

def test_divergence_exits_with_two(workspace, monkeypatch, capsys):
    def diverge(self, *args, **kwargs):
        raise DivergenceError('loss became nan')

    monkeypatch.setattr(Commands, 'deform', diverge)
    code = main(['deform', str(workspace / 'square.obj'), str(workspace / 'lifted.obj'), '--out', str(workspace / 'x.obj')])
    assert code == 2
    assert 'diverged' in capsys.readouterr().err

def test_zero_area_mesh_cannot_be_sampled(workspace):
    path = workspace / 'flat.obj'
    path.write_text('v 0 0 0\nv 1 0 0\nv 2 0 0\nf 1 2 3\n')
    assert main(['sample', str(path), '-n', '10', '-o', str(workspace / 'flat.xyz')]) == 1
    assert not (workspace / 'flat.xyz').exists()

def test_deformation_keeps_the_face_list(workspace):
    out = workspace / 'direct.obj'
    config = writeConfig(workspace, 'iterations = 2')
    assert main(['deform', str(workspace / 'cube.obj'), str(workspace / 'tetrahedron.obj'), '--out', str(out), '--config', config]) == 0
    assert np.array_equal(loadMesh(out).faces, loadMesh(workspace / 'cube.obj').faces)

def test_training_is_reproducible(workspace):
    (workspace / 'pairs.tsv').write_text('square.obj\tlifted.obj\n')
    config = writeConfig(workspace, 'trainSteps = 2', 'checkpointEvery = 0')
    for name in ('first.json', 'second.json'):
        assert main(['train', str(workspace / 'pairs.tsv'), '--out', str(workspace / name), '--config', config, '--seed', '5']) == 0
    assert (workspace / 'first.json').read_bytes() == (workspace / 'second.json').read_bytes()
    assert (workspace / 'first.trace.csv').read_bytes() == (workspace / 'second.trace.csv').read_bytes()
    assert not (workspace / 'first.epoch1.json').exists()

def test_empty_manifest_exits_with_one(workspace):
    (workspace / 'pairs.tsv').write_text('# nothing yet\n')
    assert main(['train', str(workspace / 'pairs.tsv'), '--out', str(workspace / 'model.json')]) == 1
    assert not (workspace / 'model.json').exists()

def test_eval_of_point_clouds_has_no_iou(workspace, capsys):
    config = writeConfig(workspace)
    for name in ('cube', 'tetrahedron'):
        main(['sample', str(workspace / f'{name}.obj'), '-n', '48', '-o', str(workspace / f'{name}.xyz')])
    capsys.readouterr()
    assert main(['eval', str(workspace / 'cube.xyz'), str(workspace / 'tetrahedron.xyz'), '--config', config]) == 0
    out = capsys.readouterr().out
    assert '"iou": null' in out
    assert '"leak": false' in out

def test_single_template_is_always_chosen(workspace, capsys):
    library = workspace / 'library'
    library.mkdir()
    (library / 'only.obj').write_text((workspace / 'cube.obj').read_text())
    code = main(['select-template', str(workspace / 'tetrahedron.obj'), str(library), '--mode', 'chamfer',
                 '--config', writeConfig(workspace)])
    assert code == 0
    assert capsys.readouterr().out.startswith('0\t')
