import numpy as np
import pytest
from MeshFlow.core import seeds
from MeshFlow.modules.mesh import TriMesh, PointCloud, normalizeUnitCube
from MeshFlow.modules.losses import LossWeights
from MeshFlow.modules.metrics import metricCd
from MeshFlow.modules.sampling import sampleShape
from MeshFlow.modules.nn import Tape, MlpParams, NetworkParams
from MeshFlow.modules.deform import (
    PipelineParams, DeformJob, OffsetField, TrainParams, AutoencoderParams, applyOffsets, forwardPipeline,
    deformMesh, deformPointCloud, interpolateTargets, DirectOptimizer, optimizeDirect, Trainer, train,
    AutoencoderTrainer, trainAutoencoder, TemplateSet, buildTemplateSet, selectTemplate
)

@pytest.fixture
def lifted(square):
    return square.withVertices(square.vertices + np.array([0.0, 0.0, 0.2]))

def test_untrained_network_is_the_identity(square, lifted, tinyNetwork, smallPipeline):
    result = forwardPipeline(square, lifted, tinyNetwork, seed=0, params=smallPipeline)
    assert np.array_equal(result.mesh.vertices, square.vertices)
    assert np.array_equal(result.mesh.faces, square.faces)
    assert result.report.terms['lap'] == 0.0
    assert result.report.terms['lpi'] == 0.0
    assert result.report.total > 0.0
    assert len(result.points) == 64

def test_inference_matches_the_training_pass(square, lifted, perturbedNetwork, smallPipeline):
    result = forwardPipeline(square, lifted, perturbedNetwork, seed=5, params=smallPipeline)
    mesh = deformMesh(square, lifted, perturbedNetwork, seed=5, params=smallPipeline)
    assert np.array_equal(mesh.vertices, result.mesh.vertices)
    moved = deformPointCloud(square.vertices, square, lifted, perturbedNetwork, seed=5, params=smallPipeline)
    assert np.array_equal(moved.points, mesh.vertices)

def test_pass_is_reproducible_from_seed_and_step(square, lifted, perturbedNetwork, smallPipeline):
    a = forwardPipeline(square, lifted, perturbedNetwork, seed=1, params=smallPipeline, step=3)
    b = forwardPipeline(square, lifted, perturbedNetwork, seed=1, params=smallPipeline, step=3)
    c = forwardPipeline(square, lifted, perturbedNetwork, seed=1, params=smallPipeline, step=4)
    assert a.report.total == b.report.total
    assert a.report.total != c.report.total

def test_pipeline_gradient_matches_finite_differences(square, lifted, perturbedNetwork, chamferOnly):
    bias = perturbedNetwork.decoder.layers[-1].bias
    tape = Tape()
    result = forwardPipeline(square, lifted, perturbedNetwork, seed=2, params=chamferOnly, tape=tape)
    analytic = tape.backward(result.loss).of(bias)

    h = 1e-6
    for k in range(3):
        original = bias.data[k]
        bias.data[k] = original + h
        up = forwardPipeline(square, lifted, perturbedNetwork, seed=2, params=chamferOnly).report.total
        bias.data[k] = original - h
        down = forwardPipeline(square, lifted, perturbedNetwork, seed=2, params=chamferOnly).report.total
        bias.data[k] = original
        assert np.isclose(analytic[k], (up - down) / (2.0 * h), rtol=1e-4, atol=1e-6)

@pytest.fixture
def octahedron():
    vertices = [(1.0, 0.0, 0.0), (-1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (0.0, -1.0, 0.0), (0.0, 0.0, 1.0), (0.0, 0.0, -1.0)]
    faces = [(x, y, z) for x in (0, 1) for y in (2, 3) for z in (4, 5)]
    return TriMesh(np.array(vertices), np.array(faces))

def assertPipelineGradient(source, target, network, params, entries):
    tape = Tape()
    result = forwardPipeline(source, target, network, seed=2, params=params, tape=tape)
    gradients = tape.backward(result.loss)

    h = 1e-6
    for tensor, index in entries:
        analytic = gradients.of(tensor)[index]
        original = tensor.data[index]
        tensor.data[index] = original + h
        up = forwardPipeline(source, target, network, seed=2, params=params).report.total
        tensor.data[index] = original - h
        down = forwardPipeline(source, target, network, seed=2, params=params).report.total
        tensor.data[index] = original
        assert np.isclose(analytic, (up - down) / (2.0 * h), rtol=1e-4, atol=1e-6)

def test_full_pipeline_gradient_on_a_six_vertex_mesh(octahedron, cube, perturbedNetwork):
    params = PipelineParams(meshSamples=32, pointSamples=32, encodeSamples=32)
    assert all(value > 0.0 for value in params.weights.asDict().values())
    network = perturbedNetwork
    assertPipelineGradient(octahedron, cube, network, params, [
        (network.decoder.layers[-1].bias, (0,)),
        (network.decoder.layers[-1].bias, (2,)),
        (network.decoder.layers[-1].weight, (4, 1)),
        (network.decoder.layers[0].weight, (0, 3)),
        (network.decoder.layers[0].weight, (30, 7)),
        (network.sourceEncoder.layers[0].weight, (1, 2)),
        (network.targetEncoder.layers[-1].bias, (5,)),
    ])

def test_lpi_gradient_flows_back_through_the_decoder(octahedron, cube, perturbedNetwork):
    weights = LossWeights(cdMesh=0.0, emdMesh=0.0, cdPoints=0.0, emdPoints=0.0, sym=0.0, lap=0.0, lpi=1.0)
    params = PipelineParams(weights=weights, meshSamples=32, pointSamples=32, encodeSamples=32)
    network = perturbedNetwork
    result = forwardPipeline(octahedron, cube, network, seed=2, params=params)
    assert set(result.report.terms) == {'lpi'}
    assert result.report.total > 0.0
    assertPipelineGradient(octahedron, cube, network, params, [
        (network.decoder.layers[-1].weight, (0, 0)),
        (network.decoder.layers[-1].weight, (9, 2)),
        (network.decoder.layers[0].weight, (1, 4)),
        (network.decoder.layers[0].bias, (11,)),
    ])

def test_every_term_reaches_the_parameters(square, lifted, perturbedNetwork, smallPipeline):
    tape = Tape()
    result = forwardPipeline(square, lifted, perturbedNetwork, seed=0, params=smallPipeline, tape=tape)
    gradients = tape.backward(result.loss)
    assert set(result.report.terms) == {'cdMesh', 'emdMesh', 'cdPoints', 'emdPoints', 'sym', 'lap', 'lpi'}
    assert all(np.all(np.isfinite(g)) for g in gradients.collect(perturbedNetwork.parameters()))
    assert np.any(gradients.of(perturbedNetwork.sourceEncoder.layers[0].weight) != 0.0)

def test_interpolation_endpoints(square, cube, tetrahedron, perturbedNetwork, smallPipeline):
    start = interpolateTargets(square, cube, tetrahedron, 0.0, perturbedNetwork, 3, smallPipeline)
    end = interpolateTargets(square, cube, tetrahedron, 1.0, perturbedNetwork, 3, smallPipeline)
    middle = interpolateTargets(square, cube, tetrahedron, 0.5, perturbedNetwork, 3, smallPipeline)
    assert np.array_equal(start.vertices, deformMesh(square, cube, perturbedNetwork, 3, smallPipeline).vertices)
    assert np.array_equal(end.vertices, deformMesh(square, tetrahedron, perturbedNetwork, 3, smallPipeline).vertices)
    assert not np.array_equal(middle.vertices, start.vertices)
    with pytest.raises(ValueError):
        interpolateTargets(square, cube, tetrahedron, 1.5, perturbedNetwork, 3, smallPipeline)

def test_apply_offsets(square):
    moved = applyOffsets(square, np.full((4, 3), 0.5))
    assert np.array_equal(moved.vertices, square.vertices + 0.5)
    with pytest.raises(ValueError):
        OffsetField(np.array([[np.nan, 0.0, 0.0]]))
    with pytest.raises(ValueError):
        applyOffsets(square, np.zeros((3, 3)))

def test_direct_optimization_reduces_the_loss(square, lifted, chamferOnly):
    job = DeformJob(square, lifted, chamferOnly, iterations=20, stepSize=1e-2, seed=0, mode='direct', resample=False)
    streamed = []
    optimizer = DirectOptimizer(job)
    optimizer.trace.subscribe(streamed.append)
    result = optimizer.run()

    assert len(result.trace) == 21
    assert len(streamed) == 21
    assert result.trace.best().step == result.bestStep
    assert result.trace.best().total < result.trace.rows[0].total
    assert np.array_equal(result.mesh.vertices, square.vertices + result.offsets.offsets)

def stretchJob(cube, makeBox, samples: int, iterations: int, seed: int) -> DeformJob:
    """Unit cube toward a centered 2 x 1 x 1 box under the Chamfer and Laplacian terms."""
    weights = LossWeights(cdMesh=1.0, emdMesh=0.0, cdPoints=1.0, emdPoints=0.0, sym=0.0, lap=1.0, lpi=0.0)
    params = PipelineParams(weights=weights, meshSamples=samples, pointSamples=samples, encodeSamples=64)
    box = makeBox((-1.0, -0.5, -0.5), (1.0, 0.5, 0.5))
    return DeformJob(cube, box, params, iterations=iterations, stepSize=1e-2, seed=seed, mode='direct')

def normalizedCd(shape, reference, samples: int = 2048) -> float:
    cloud = sampleShape(normalizeUnitCube(shape)[0], samples, seeds.stream(0, seeds.CLI_SAMPLE))
    other = sampleShape(normalizeUnitCube(reference)[0], samples, seeds.stream(1, seeds.CLI_SAMPLE))
    return metricCd(cloud, other)

def test_cube_stretches_onto_a_long_box(cube, makeBox):
    job = stretchJob(cube, makeBox, samples=2048, iterations=500, seed=3)
    result = optimizeDirect(job)
    assert len(result.trace) == 501
    assert np.array_equal(result.mesh.faces, cube.faces)
    assert normalizedCd(result.mesh, job.target) < 0.1 * normalizedCd(cube, job.target)

def test_stretch_runs_cut_the_median_total_loss(cube, makeBox):
    ratios = []
    for seed in range(10):
        trace = optimizeDirect(stretchJob(cube, makeBox, samples=1024, iterations=150, seed=seed)).trace
        ratios.append(trace.best().total / trace.rows[0].total)
    assert np.median(ratios) < 0.25

def test_direct_optimization_with_no_budget_returns_the_source(square, lifted, smallPipeline):
    job = DeformJob(square, lifted, smallPipeline, iterations=0, mode='direct')
    result = optimizeDirect(job)
    assert len(result.trace) == 1
    assert result.bestStep == 0
    assert np.array_equal(result.mesh.vertices, square.vertices)
    assert result.trace.rows[0].terms['lpi'] == 0.0

def test_direct_optimizer_needs_a_direct_job(square, lifted):
    with pytest.raises(ValueError):
        DirectOptimizer(DeformJob(square, lifted, mode='network'))
    with pytest.raises(ValueError):
        DeformJob(square, lifted, stepSize=0.0)

def test_training_overfits_a_single_pair(cube, makeBox, tinyNetwork, smallPipeline):
    target = makeBox((-0.5, -0.5, -0.5), (0.5, 0.5, 0.8))
    config = TrainParams(steps=200, learningRate=1e-3, resample=False, pipeline=smallPipeline)
    result = train([(cube, target)], tinyNetwork, config)
    totals = result.trace.totals()
    assert len(totals) == 200
    assert result.trace.rows[-1].terms['lap'] > 0.0
    assert totals[-1] < totals[0]
    assert result.network is tinyNetwork

def test_training_traces_are_bit_identical(square, lifted, cube, tinyArchitecture, smallPipeline):
    config = TrainParams(steps=6, learningRate=1e-3, seed=9, pipeline=smallPipeline)
    runs = [train([(square, lifted), (square, cube)], NetworkParams.create(7, tinyArchitecture), config) for _ in range(2)]
    assert runs[0].trace.toCsv() == runs[1].trace.toCsv()
    assert all(np.array_equal(a, b) for a, b in zip(runs[0].network.snapshot(), runs[1].network.snapshot()))

def test_epochs_end_after_each_pass_and_at_the_last_step(square, lifted, cube, tinyNetwork, chamferOnly):
    epochs = []
    config = TrainParams(steps=5, learningRate=1e-3, pipeline=chamferOnly)
    Trainer([(square, lifted), (square, cube)], tinyNetwork, config).run(
        lambda epoch, network, trace: epochs.append((epoch, len(trace)))
    )
    assert epochs == [(1, 2), (2, 4), (3, 5)]

def test_zero_learning_rate_keeps_the_parameters(square, lifted, tinyNetwork, chamferOnly):
    before = tinyNetwork.snapshot()
    train([(square, lifted)], tinyNetwork, TrainParams(steps=2, learningRate=0.0, pipeline=chamferOnly))
    assert all(np.array_equal(a, b) for a, b in zip(before, tinyNetwork.snapshot()))
    with pytest.raises(ValueError):
        train([], tinyNetwork)

def test_autoencoder_training(cube, tetrahedron):
    config = AutoencoderParams(steps=3, samples=32, outputPoints=16, encoderWidths=(8, 16), hiddenWidth=8)
    result = AutoencoderTrainer([cube, tetrahedron], config).run()
    assert len(result.trace) == 3
    assert result.encoder.name == 'embedding'
    assert result.encoder.outputs == 16
    assert trainAutoencoder([cube], config).fingerprint() == result.encoder.fingerprint()

@pytest.fixture
def library(cube, tetrahedron, makeBox):
    farTetrahedron = tetrahedron.withVertices(tetrahedron.vertices + 4.0)
    slab = makeBox((-3.0, -3.0, 2.0), (-1.0, -1.0, 2.2))
    return [cube, farTetrahedron, slab]

def test_chamfer_selection_finds_the_matching_template(library):
    templates = buildTemplateSet(library, samples=128, categories=['box', 'tet', 'box'])
    assert selectTemplate(library[1], templates, mode='chamfer') == 1
    assert selectTemplate(library[2], templates, mode='chamfer') == 2
    assert selectTemplate(library[1], templates, mode='chamfer', category='box') in (0, 2)
    with pytest.raises(ValueError):
        selectTemplate(library[1], templates, mode='chamfer', category='chair')
    with pytest.raises(ValueError):
        selectTemplate(library[1], templates, mode='nearest')

def test_equal_distances_pick_the_lowest_id(cube):
    cloud = sampleShape(cube, 64, 0).points
    templates = TemplateSet(meshes=(cube, cube), clouds=(cloud, cloud))
    assert selectTemplate(cube, templates, mode='chamfer') == 0

def test_embedding_mode_needs_a_matching_encoder(library, rng):
    encoder = MlpParams.create('embedding', 3, (8, 16), rng)
    templates = buildTemplateSet(library, encoder, seed=4, samples=128)
    assert templates.embeddings.shape == (3, 16)

    with pytest.raises(ValueError):
        selectTemplate(library[1], buildTemplateSet(library, samples=16), mode='embedding')
    other = MlpParams.create('embedding', 3, (8, 12), rng)
    with pytest.raises(ValueError):
        selectTemplate(library[1], templates, other)

@pytest.fixture
def toyLibrary(makeBox, tetrahedron):
    boxes = [
        ((-0.5, -0.5, -0.5), (0.5, 0.5, 0.5)),
        ((0.0, 0.0, 0.0), (2.0, 0.3, 0.3)),
        ((0.0, 0.0, 0.0), (0.3, 2.0, 0.3)),
        ((0.0, 0.0, 0.0), (0.3, 0.3, 2.0)),
        ((-1.0, -1.0, 0.0), (1.0, 1.0, 0.2)),
        ((1.0, 1.0, 1.0), (1.5, 1.5, 1.5)),
        ((-2.0, -2.0, -2.0), (-1.0, -1.0, -1.0)),
        ((-1.0, 0.5, -1.0), (0.0, 1.5, 1.0)),
    ]
    tetrahedra = [
        tetrahedron,
        tetrahedron.withVertices(2.0 * tetrahedron.vertices),
        tetrahedron.withVertices(tetrahedron.vertices + np.array([1.0, -1.5, 0.0])),
        tetrahedron.withVertices(-tetrahedron.vertices),
    ]
    return [makeBox(low, high) for low, high in boxes] + tetrahedra

def test_chamfer_selection_retrieves_every_template(toyLibrary):
    templates = buildTemplateSet(toyLibrary, seed=2, samples=256)
    chosen = [selectTemplate(mesh, templates, mode='chamfer', seed=2) for mesh in toyLibrary]
    assert chosen == list(range(len(toyLibrary)))

def test_trained_embedding_retrieves_nine_in_ten_templates(toyLibrary):
    config = AutoencoderParams(
        steps=240, samples=128, outputPoints=64, encoderWidths=(16, 32), hiddenWidth=32, learningRate=1e-3
    )
    result = AutoencoderTrainer(toyLibrary, config).run()
    totals = result.trace.totals()
    count = len(toyLibrary)
    assert np.mean(totals[-count:]) < np.mean(totals[:count])

    templates = buildTemplateSet(toyLibrary, result.encoder, seed=2, samples=128)
    hits = sum(selectTemplate(mesh, templates, result.encoder, seed=2) == k for k, mesh in enumerate(toyLibrary))
    assert hits >= 0.9 * count

def test_autoencoder_reconstruction_improves(cube, tetrahedron, makeBox):
    shapes = [cube, tetrahedron, makeBox((0.0, 0.0, 0.0), (2.0, 0.3, 0.3)), makeBox((-1.0, -1.0, 0.0), (1.0, 1.0, 0.2))]
    config = AutoencoderParams(steps=200, samples=64, outputPoints=32, encoderWidths=(16, 32), hiddenWidth=32)
    totals = AutoencoderTrainer(shapes, config).run().trace.totals()
    assert len(totals) == 200
    assert totals[196] < totals[0]
    assert np.mean(totals[-4:]) < np.mean(totals[:4])

def test_template_set_validation(cube):
    with pytest.raises(ValueError):
        TemplateSet(meshes=(), clouds=())
    with pytest.raises(ValueError):
        TemplateSet(meshes=(cube,), clouds=())
