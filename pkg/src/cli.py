"""src/cli.py."""

import contextlib
import csv
import logging
import re
import sys
from collections import Counter
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import click
from dishka import Container
from pydantic import ValidationError

from src.apps.attnflow.schemas import FlowReportRow
from src.apps.attnflow.services.flow import FlowAnalyzer, read_cue_labels
from src.apps.contrastive.schemas import ContrastiveInstance, GroupAccuracy
from src.apps.contrastive.services.chinese import ChineseVariantGenerator
from src.apps.contrastive.services.german import GermanVariantGenerator, load_vocabulary
from src.apps.contrastive.services.io import dump_instances, read_instances, read_references, read_score_lines
from src.apps.contrastive.services.scoring import ContrastiveScorer
from src.apps.cuescan.schemas import QuadrantRow
from src.apps.cuescan.services.scanner import (
    MORPHOLOGY_CAVEAT,
    CueScanner,
    read_parallel,
    write_filtered,
)
from src.apps.negdata.schemas import AnnotatedSentence
from src.apps.negdata.services.manual import ManualEvalService
from src.apps.negdata.services.negpar import NegParService
from src.apps.probe.schemas import OutcomeRow, ProbeRunMeta, ProjectionRow, SweepRow
from src.apps.probe.services.dataset import ProbeDatasetBuilder
from src.apps.probe.services.training import ProbeAnalysis, ProbeTrainer
from src.apps.reports.schemas import Report, ReportTable, RunConfig
from src.apps.reports.services.charts import emit_chart
from src.apps.reports.services.writer import ReportWriter, WarningCollector
from src.apps.reprsim.schemas import LayerRef, SimTriple, parse_layer_refs
from src.apps.reprsim.services import SimilarityAnalyzer
from src.apps.tracestore.schemas import TraceDims, TraceSet
from src.apps.tracestore.services.container import TraceContainer
from src.apps.tracestore.services.synth import TraceSynthesizer
from src.container_factory import create_container
from src.core.config import Settings, load_settings
from src.core.enum import (
    ChartKind,
    DecoderMixing,
    FilterPolicy,
    FlowMeasure,
    HeadMode,
    MatchMode,
    Pooling,
    ProbeTask,
    ReportFormat,
    Side,
    Split,
    TextMode,
    TranslationCategory,
)
from src.core.exceptions import (
    BadRequestError,
    DomainException,
    ResourceNotFoundError,
    StorageError,
    ValidationFailedError,
    render_error,
)
from src.core.utils import atomic_write_bytes, parse_int_list

logger = logging.getLogger(__name__)

PATH = click.Path(path_type=Path, dir_okay=False)


def _choice(enum_cls) -> click.Choice:
    return click.Choice([e.value for e in enum_cls])


def _parse_corpora(ctx, param, values) -> List[Tuple[Split, Path]]:  # pylint: disable=unused-argument
    parsed = []
    for value in values:
        split, sep, path = value.partition("=")
        if not sep or not path:
            raise click.BadParameter(f"expected split=path, got {value!r}")
        try:
            parsed.append((Split(split), Path(path)))
        except ValueError as e:
            raise click.BadParameter(f"unknown split {split!r}") from e
    return parsed


class CliState:
    """
    Settings sources and the warning collector shared by all commands.
    """

    def __init__(self, config_path: Optional[Path], overrides: Dict[str, Any], formats: List[ReportFormat]):
        self.config_path = config_path
        self.overrides = overrides
        self.formats = formats
        self.collector = WarningCollector()

    def settings(self, **overrides: Any) -> Settings:
        """Config file, then global flags, then command flags."""
        return load_settings(self.config_path, **{**self.overrides, **overrides})

    def container(self, **overrides: Any) -> Container:
        return create_container(self.settings(**overrides))


def _finish(
    state: CliState,
    container: Container,
    command: str,
    tables: Sequence[ReportTable],
    inputs: Sequence[Path] = (),
    lexicons: Sequence[Path] = (),
    options: Optional[Dict[str, Any]] = None,
    seeds: Sequence[int] = (),
    notes: Sequence[str] = (),
    staging: Optional[Path] = None,
) -> Report:
    settings = container.get(Settings)
    writer = container.get(ReportWriter)
    run = RunConfig(
        command=command,
        inputs=list(inputs),
        lexicons=list(lexicons),
        options=options or {},
        seeds=list(seeds),
        output_dir=settings.OUTPUT_DIR,
        formats=state.formats or [ReportFormat.CSV, ReportFormat.JSON],
    )
    report = writer.build_report(run, tables, [*notes, *state.collector.messages])
    written = writer.write_report(report, run.output_dir, run.formats, staging=staging)
    click.echo(click.style(f"{command}: wrote {len(written)} file(s) to {run.output_dir}", fg="green"))
    return report


def _read_corpora(container: Container, corpora: Sequence[Tuple[Split, Path]]) -> Dict[Split, List[AnnotatedSentence]]:
    negpar = container.get(NegParService)
    result: Dict[Split, List[AnnotatedSentence]] = {}
    for split, path in corpora:
        result.setdefault(split, []).extend(negpar.parse_negpar(path, split))
    return result


def _read_traces(container: Container, paths: Sequence[Path]) -> TraceSet:
    store = container.get(TraceContainer)
    return store.merge(store.read_trace(p) for p in paths)


@click.group()
@click.option("--config", "config_path", type=PATH, default=None, help="TOML config file")
@click.option("--jobs", type=click.IntRange(min=1), default=None, help="Worker processes")
@click.option("--seed", type=int, default=None, help="Base seed for every random step")
@click.option("--out", "output_dir", type=click.Path(path_type=Path, file_okay=False), default=None)
@click.option("--format", "formats", multiple=True, type=_choice(ReportFormat), help="Report formats")
@click.pass_context
def cli(ctx, config_path, jobs, seed, output_dir, formats):
    """Negation analysis toolkit for machine translation."""
    overrides = {"JOBS": jobs, "DEFAULT_SEED": seed, "PROBE_BASE_SEED": seed, "OUTPUT_DIR": output_dir}
    state = CliState(config_path, overrides, [ReportFormat(f) for f in formats])
    logging.basicConfig(level=state.settings().LOG_LEVEL)
    ctx.with_resource(state.collector)
    ctx.obj = state


@cli.command()
@click.option("--corpus", "corpora", multiple=True, required=True, callback=_parse_corpora, help="split=path")
@click.pass_obj
def ingest(state: CliState, corpora):
    """Parses annotation files and reports component counts per split."""
    container = state.container()
    negpar = container.get(NegParService)
    rows = []
    for split, path in corpora:
        stats = negpar.corpus_stats(negpar.parse_negpar(path, split))
        rows.append({"split": split.value, "file": path.name, **stats.model_dump()})
    table = ReportTable(
        name="corpus_stats", columns=["split", "file", "sentences", "instances", "cue", "event", "scope"], rows=rows
    )
    _finish(state, container, "ingest", [table], inputs=[p for _, p in corpora])


@cli.group()
def contrastive():
    """Contrastive polarity test sets."""


@contrastive.command("gen")
@click.option("--input", "input_path", type=PATH, required=True, help="JSONL of references")
@click.option("--lang", type=click.Choice(["de", "zh"]), required=True)
@click.option("--vocab", type=PATH, default=None, help="Word list for un- insertion")
@click.option("--name", default="contrastive", help="Output file stem")
@click.pass_obj
def contrastive_gen(state: CliState, input_path, lang, vocab, name):
    """Generates polarity-reversed variants for every reference."""
    container = state.container()
    if lang == "de":
        german = GermanVariantGenerator(load_vocabulary(vocab)) if vocab else container.get(GermanVariantGenerator)
        generate = german.gen_german_variants
    else:
        generate = container.get(ChineseVariantGenerator).gen_chinese_variants
    instances: List[ContrastiveInstance] = []
    for ref in read_references(input_path):
        variants = generate(ref.reference_tokens, ref.pos_tags)
        if not variants:
            logger.warning("No rule applies to %s, skipped", ref.instance_id)
            continue
        instances.append(
            ContrastiveInstance(
                instance_id=ref.instance_id,
                source_tokens=ref.source_tokens,
                reference_tokens=ref.reference_tokens,
                variants=variants,
            )
        )
    per_rule = Counter((v.rule_tag.value, v.direction.value, v.needs_review) for i in instances for v in i.variants)
    table = ReportTable(
        name="variants",
        columns=["rule", "direction", "needs_review", "count"],
        rows=[
            {"rule": r, "direction": d, "needs_review": review, "count": n}
            for (r, d, review), n in sorted(per_rule.items())
        ],
    )
    settings = container.get(Settings)
    with container.get(ReportWriter).staging_area(settings.OUTPUT_DIR) as staging:
        atomic_write_bytes(staging / f"{name}.jsonl", dump_instances(instances).encode("utf-8"))
        _finish(
            state,
            container,
            "contrastive gen",
            [table],
            inputs=[input_path, *([vocab] if vocab else [])],
            staging=staging,
        )


@contrastive.command("score")
@click.option("--instances", "instances_path", type=PATH, required=True)
@click.option("--scores", "scores_path", type=PATH, required=True, help="JSONL of token log-probabilities")
@click.pass_obj
def contrastive_score(state: CliState, instances_path, scores_path):
    """Contrastive accuracy per rule, per direction and overall."""
    container = state.container()
    scorer = container.get(ContrastiveScorer)
    groups = scorer.group_scores(read_instances(instances_path), read_score_lines(scores_path))
    accuracy = scorer.contrastive_accuracy(groups)
    table = ReportTable.from_models("accuracy", accuracy.rows, GroupAccuracy)
    _finish(state, container, "contrastive score", [table], inputs=[instances_path, scores_path])


@cli.command()
@click.option("--trace", "traces", multiple=True, type=PATH, required=True)
@click.option("--cues", "cues_path", type=PATH, required=True, help="CSV of pair_id,src_pos,category")
@click.option("--layers", default=None, help="Decoder layers, e.g. 2,4,6")
@click.option("--measure", type=_choice(FlowMeasure), default=FlowMeasure.FLOW.value)
@click.option("--heads", type=_choice(HeadMode), default=None)
@click.option("--mixing", type=_choice(DecoderMixing), default=None)
@click.pass_obj
def flow(state: CliState, traces, cues_path, layers, measure, heads, mixing):
    """Attention flow (or raw attention) from decoder layers to source cues."""
    container = state.container(HEAD_MODE=heads, DECODER_MIXING=mixing)
    settings = container.get(Settings)
    layer_list = parse_int_list(layers, "layers") if layers else settings.FLOW_LAYERS
    trace_set = _read_traces(container, traces)
    report = container.get(FlowAnalyzer).flow_report(trace_set, read_cue_labels(cues_path), layer_list, FlowMeasure(measure))
    table = ReportTable.from_models("flow", report.rows, FlowReportRow)
    options = {
        "layers": layer_list,
        "measure": report.measure.value,
        "head_mode": report.head_mode.value,
        "decoder_mixing": report.decoder_mixing.value,
        "trace_flags": report.flags.model_dump(mode="json"),
    }
    _finish(state, container, "flow", [table], inputs=[*traces, cues_path], options=options)


@cli.command()
@click.option("--corpus", "corpora", multiple=True, required=True, callback=_parse_corpora, help="split=path")
@click.option("--trace", "traces", multiple=True, type=PATH, required=True)
@click.option("--task", type=_choice(ProbeTask), default=ProbeTask.CUE.value)
@click.option("--side", type=_choice(Side), default=Side.ENC.value)
@click.option("--layer", type=int, default=None)
@click.option("--sweep", is_flag=True, help="Dev F1 for every layer")
@click.option("--layers", default=None, help="Layers of the sweep, e.g. 0-6")
@click.option("--pooling", type=_choice(Pooling), default=None)
@click.option("--hidden", type=click.IntRange(min=1), default=None)
@click.option("--epochs", type=click.IntRange(min=1), default=None)
@click.option("--seeds", type=click.IntRange(min=1), default=None, help="Number of seeds")
@click.option("--baseline", is_flag=True, help="Add the word-alignment reference rows")
@click.option("--manual", "manual_path", type=PATH, default=None, help="Manual labels for the outcome comparison")
@click.pass_obj
def probe(state: CliState, corpora, traces, task, side, layer, sweep, layers, pooling, hidden, epochs, seeds, baseline, manual_path):
    """Trains MLP probes on exported hidden states."""
    if not sweep and layer is None:
        raise BadRequestError("Give --layer or --sweep")
    container = state.container(PROBE_HIDDEN=hidden, PROBE_EPOCHS=epochs, PROBE_SEEDS=seeds, PROBE_POOLING=pooling)
    settings = container.get(Settings)
    by_split = _read_corpora(container, corpora)
    if Split.TRAIN not in by_split or Split.DEV not in by_split:
        raise BadRequestError("Probing needs a train and a dev corpus")
    trace_set = _read_traces(container, traces)
    task, side, pooling = ProbeTask(task), Side(side), Pooling(settings.PROBE_POOLING)
    analysis = container.get(ProbeAnalysis)
    meta = ProbeRunMeta(
        task=task,
        side=side,
        layer=None if sweep else layer,
        pooling=pooling,
        hidden=settings.PROBE_HIDDEN,
        epochs=settings.PROBE_EPOCHS,
        seeds=settings.PROBE_SEED_VALUES,
        learning_rate=settings.PROBE_LEARNING_RATE,
    )
    inputs = [p for _, p in corpora] + list(traces)

    if sweep:
        layer_list = parse_int_list(layers, "layers") if layers else None
        rows = analysis.layer_sweep(by_split[Split.TRAIN], by_split[Split.DEV], trace_set, task, side, layer_list, pooling)
        tables = [ReportTable.from_models("probe_sweep", rows, SweepRow)]
    else:
        builder = container.get(ProbeDatasetBuilder)
        datasets = {
            split: builder.token_dataset(by_split[split], trace_set, side, layer, task, pooling)
            for split in (Split.TRAIN, Split.DEV, Split.TEST)
            if split in by_split
        }
        models = container.get(ProbeTrainer).train_probe(datasets[Split.TRAIN], datasets[Split.DEV], task, side, layer)
        evaluated = {s: d for s, d in datasets.items() if s != Split.TRAIN}
        tables = [ReportTable.from_models("projection", analysis.projection_table(models, evaluated, baseline), ProjectionRow)]
        if manual_path:
            labels = ManualEvalService.read_manual_labels(manual_path)
            held_out = by_split.get(Split.TEST, by_split[Split.DEV])
            outcomes = analysis.outcome_comparison(models, held_out, trace_set, labels, pooling)
            tables.append(ReportTable.from_models("outcomes", outcomes, OutcomeRow))
            inputs.append(manual_path)
    _finish(
        state, container, "probe", tables, inputs=inputs, options=meta.model_dump(mode="json"), seeds=meta.seeds
    )


@cli.command()
@click.option("--corpus", "corpora", multiple=True, required=True, callback=_parse_corpora, help="split=path")
@click.option("--trace", "traces", multiple=True, type=PATH, required=True)
@click.option("--side", type=_choice(Side), default=None, help="Side of bare layer numbers")
@click.option("--layers", default=None, help="Layer references, e.g. 1..6,dec6")
@click.pass_obj
def sim(state: CliState, corpora, traces, side, layers):
    """Cosine similarity of cues to events, scope and other tokens per layer."""
    container = state.container()
    sentences = [s for group in _read_corpora(container, corpora).values() for s in group]
    trace_set = _read_traces(container, traces)
    if layers:
        refs = parse_layer_refs(layers, Side(side) if side else Side.ENC)
    elif trace_set.traces:
        dims = trace_set.traces[0].dims
        if side == Side.DEC.value:
            refs = [LayerRef(side=Side.DEC, layer=i) for i in range(1, dims.dec_layers + 1)]
        else:
            refs = [LayerRef(side=Side.ENC, layer=i) for i in range(1, dims.enc_layers + 1)]
            if side is None:
                refs.append(LayerRef(side=Side.DEC, layer=dims.dec_layers))
    else:
        raise ValidationFailedError("Empty trace set")
    rows = container.get(SimilarityAnalyzer).sim_sweep(sentences, trace_set, refs)
    table = ReportTable.from_models("similarity", rows, SimTriple)
    options = {"layers": [str(r) for r in refs]}
    _finish(state, container, "sim", [table], inputs=[*(p for _, p in corpora), *traces], options=options)


@cli.command()
@click.option("--src", "src_path", type=PATH, required=True)
@click.option("--tgt", "tgt_path", type=PATH, required=True)
@click.option("--src-lex", type=PATH, default=None)
@click.option("--tgt-lex", type=PATH, default=None)
@click.option("--text-mode", type=_choice(TextMode), default=TextMode.TOKENIZED.value)
@click.option("--filter", "policy", type=_choice(FilterPolicy), default=None)
@click.option("--out", "--prefix", "prefix", default="filtered", help="Stem of the filtered corpus files")
@click.pass_obj
def scan(state: CliState, src_path, tgt_path, src_lex, tgt_lex, text_mode, policy, prefix):
    """Cue-match table of a raw parallel corpus, optionally filtered."""
    container = state.container(EN_LEXICON=src_lex, ZH_LEXICON=tgt_lex)
    settings = container.get(Settings)
    configured = container.get(CueScanner)
    scanner = CueScanner(configured.src_lexicon, configured.tgt_lexicon, TextMode(text_mode))
    pairs = read_parallel(src_path, tgt_path)
    with contextlib.ExitStack() as stack:
        staging: Optional[Path] = None
        if policy:
            policy = FilterPolicy(policy)
            staging = stack.enter_context(container.get(ReportWriter).staging_area(settings.OUTPUT_DIR))
            kept, table = scanner.filter_matched(pairs, policy)
            write_filtered(kept, staging, prefix, with_tags=policy == FilterPolicy.KEEP_ALL_TAGGED)
        else:
            table = scanner.mismatch_table(pairs)
        summary = ReportTable(
            name="cue_match_summary",
            columns=["total", "mismatches", "mismatch_pct", "unreadable", "text_mode"],
            rows=[
                {
                    "total": table.total,
                    "mismatches": table.mismatches,
                    "mismatch_pct": round(100 * table.mismatch_rate, 1),
                    "unreadable": table.unreadable,
                    "text_mode": table.text_mode.value,
                }
            ],
        )
        notes = [MORPHOLOGY_CAVEAT] if scanner.src_lexicon.match_mode == MatchMode.WORD else []
        _finish(
            state,
            container,
            "scan",
            [ReportTable.from_models("cue_match", table.rows(), QuadrantRow), summary],
            inputs=[src_path, tgt_path],
            lexicons=[settings.EN_LEXICON, settings.ZH_LEXICON],
            options={"text_mode": table.text_mode.value, "filter": policy.value if policy else None},
            notes=notes,
            staging=staging,
        )



@cli.group()
def trace():
    """Trace container utilities."""


@trace.command("validate")
@click.option("--trace", "traces", multiple=True, type=PATH, required=True)
@click.pass_obj
def trace_validate(state: CliState, traces):
    """Checks container structure and attention invariants."""
    container = state.container()
    trace_set = _read_traces(container, traces)
    rows = [{"pair_id": t.pair_id, **t.dims.model_dump()} for t in trace_set.traces]
    table = ReportTable(name="traces", columns=["pair_id", *TraceDims.model_fields], rows=rows)
    _finish(state, container, "trace validate", [table], inputs=list(traces))


@trace.command("synth")
@click.option("--dims", required=True, help="Le,Ld,H,S,T,D")
@click.option("--count", type=click.IntRange(min=1), default=1)
@click.option("--out-file", type=PATH, required=True)
@click.option("--seed", type=int, default=None, help="Overrides the global seed")
@click.pass_obj
def trace_synth(state: CliState, dims, count, out_file, seed):
    """Writes random but valid traces for fixtures."""
    container = state.container(DEFAULT_SEED=seed)
    seed = container.get(Settings).DEFAULT_SEED
    trace_set = container.get(TraceSynthesizer).synth_set(seed, TraceDims.parse(dims), count)
    container.get(TraceContainer).write_trace(trace_set, out_file)
    click.echo(click.style(f"trace synth: wrote {count} trace(s) to {out_file}", fg="green"))


@cli.group()
def report():
    """Reports from existing results."""


def _parse_counts(value: str) -> Dict[TranslationCategory, int]:
    counts = {}
    for part in value.split(","):
        name, sep, number = part.partition("=")
        try:
            counts[TranslationCategory(name.strip())] = int(number)
        except ValueError as e:
            raise BadRequestError(f"Invalid count {part!r}") from e
        if not sep:
            raise BadRequestError(f"Invalid count {part!r}")
    return counts


@report.command("manual")
@click.option("--labels", "labels_path", type=PATH, default=None, help="CSV of pair_id,category")
@click.option("--counts", default=None, help="Correct=..,Rephrased=..,Reordered=..,Incorrect=..,Dropped=..")
@click.pass_obj
def report_manual(state: CliState, labels_path, counts):
    """Manual-evaluation accuracy from labels or from published counts."""
    if bool(labels_path) == bool(counts):
        raise BadRequestError("Give exactly one of --labels and --counts")
    container = state.container()
    service = container.get(ManualEvalService)
    if labels_path:
        result = service.aggregate_manual(service.read_manual_labels(labels_path))
    else:
        result = service.manual_from_counts(_parse_counts(counts))
    categories = ReportTable(
        name="manual",
        columns=["category", "count", "pct"],
        rows=[{"category": c.value, "count": result.counts[c], "pct": result.percentages[c]} for c in TranslationCategory],
    )
    summary = ReportTable(
        name="manual_summary",
        columns=["total", "accuracy_pct", "dropped_pct"],
        rows=[{"total": result.total, "accuracy_pct": result.accuracy_pct, "dropped_pct": result.dropped_pct}],
    )
    _finish(state, container, "report manual", [categories, summary], inputs=[labels_path] if labels_path else [])


def _cell_value(raw: str):
    if raw == "":
        return None
    for cast in (int, float):
        try:
            return cast(raw)
        except ValueError:
            continue
    return raw


def read_table_csv(path: Path) -> ReportTable:
    """Reads a CSV written by any command back into a table."""
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            rows = [{k: _cell_value(v) for k, v in row.items()} for row in reader]
            columns = list(reader.fieldnames or [])
    except FileNotFoundError as e:
        raise ResourceNotFoundError(f"Table not found: {path}") from e
    if not columns:
        raise ValidationFailedError(f"{path} has no header")
    name = re.sub(r"[^a-z0-9_]", "_", path.stem.lower())
    return ReportTable(name=name, columns=columns, rows=rows)


@report.command("chart")
@click.option("--table", "table_path", type=PATH, required=True, help="CSV result table")
@click.option("--kind", type=_choice(ChartKind), required=True)
@click.option("--x", "x_columns", multiple=True, help="Category columns")
@click.option("--y", "y_columns", multiple=True, help="Series columns")
@click.pass_obj
def report_chart(state: CliState, table_path, kind, x_columns, y_columns):
    """Renders a result table as a standalone SVG chart."""
    settings = state.settings()
    table = read_table_csv(table_path)
    svg = emit_chart(table, ChartKind(kind), x_columns or None, y_columns or None)
    target = settings.OUTPUT_DIR / f"{table.name}.svg"
    atomic_write_bytes(target, svg)
    click.echo(click.style(f"report chart: wrote {target}", fg="green"))


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Runs the CLI and maps failures to exit codes:
    1 usage, 2 validation, 3 I/O.
    """
    try:
        cli.main(args=list(argv) if argv is not None else None, prog_name="negtool", standalone_mode=False)
    except (click.ClickException, click.exceptions.Abort) as e:
        if isinstance(e, click.ClickException):
            e.show()
        return 1
    except DomainException as e:
        click.echo(render_error(e).model_dump_json(), err=True)
        return e.exit_code
    except ValidationError as e:
        click.echo(render_error(ValidationFailedError(str(e.errors()[0]["msg"]))).model_dump_json(), err=True)
        return ValidationFailedError.exit_code
    except OSError as e:
        click.echo(render_error(StorageError(str(e))).model_dump_json(), err=True)
        return StorageError.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
