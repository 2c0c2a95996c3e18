# Copyright 2025 The acc-treekit Authors
# Licensed under the Apache License, Version 2.0

"""Command-line entry point: ``acc-treekit <command> ...``."""

import logging
import math
import sys
from pathlib import Path
from typing import Sequence

import click
from pydantic import BaseModel, Field, ValidationError, field_validator
from tabulate import tabulate

from acc_treekit.acc.census import census, format_table
from acc_treekit.acc.detector import detect_all
from acc_treekit.acc.transformer import detransform, transform_corpus
from acc_treekit.constants import eval_constants
from acc_treekit.errors import AccTreekitError, InvariantViolation, TokenMismatchError
from acc_treekit.evaluation.coord_eval import evaluate, extract_predicted, gold_summary, parse_gold
from acc_treekit.evaluation.evalb import labeled_bracket_f1
from acc_treekit.pcfg_lab.cky import cky_best
from acc_treekit.pcfg_lab.grammar import Grammar, extract_grammar, lexicon_for, rule_diff, rules_for
from acc_treekit.treebank_io import Tree, format_corpus, read_corpus, serialize, write_corpus
from acc_treekit.utils.config import Settings, configure_logging
from acc_treekit.utils.parallel import parallel_map
from acc_treekit.utils.reports import dumps_json, dumps_jsonl, write_text_atomic

logger = logging.getLogger(__name__)


class RunConfig(BaseModel):
    """Validated arguments of one command, checked before any work starts."""

    command: str
    inputs: list[Path] = []
    output: Path | None = None
    report: Path | None = None
    pretty: bool = False
    metrics: list[str] = []
    jobs: int = Field(default=1, ge=1)

    @field_validator("inputs")
    @classmethod
    def _inputs_exist(cls, paths: list[Path]) -> list[Path]:
        missing = [str(p) for p in paths if not p.exists()]
        if missing:
            raise ValueError(f"input not found: {', '.join(missing)}")
        return paths

    @field_validator("metrics")
    @classmethod
    def _known_metrics(cls, metrics: list[str]) -> list[str]:
        unknown = [m for m in metrics if m not in eval_constants["metrics"]]
        if unknown:
            raise ValueError(f"unknown metrics {unknown}; choose from {list(eval_constants['metrics'])}")
        return metrics

    @classmethod
    def build(cls, **fields) -> "RunConfig":
        """Validates command-line arguments; failures are usage errors."""
        try:
            return cls(**fields)
        except ValidationError as e:
            raise click.UsageError(f"invalid arguments: {e}") from e


def _emit(text: str, output: Path | None) -> None:
    if output is None:
        click.echo(text, nl=False)
    else:
        write_text_atomic(output, text)


def _jobs(ctx: click.Context, jobs: int | None) -> int:
    return jobs if jobs is not None else ctx.obj.jobs


jobs_option = click.option(
    "--jobs", type=int, default=None, help="Worker processes (default ACC_TREEKIT_JOBS or 1)."
)
sections_option = click.option(
    "--sections", default=None, help="PTB section range such as 02-21 when --in is a directory."
)


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.option("--log-level", default=None, help="Logging level (default ACC_TREEKIT_LOG_LEVEL).")
@click.pass_context
def cli(ctx: click.Context, log_level: str | None):
    """Argument cluster coordination treebank toolkit."""
    settings = ctx.obj if isinstance(ctx.obj, Settings) else Settings.from_env()
    configure_logging((log_level or settings.log_level).upper())
    ctx.obj = settings


@cli.command()
@click.option("--in", "in_path", required=True, help="Bracketed corpus file or directory.")
@click.option("--out", "out_path", default=None, help="Output corpus (default stdout).")
@click.option("--report", default=None, help="JSON report of every candidate.")
@click.option("--pretty", is_flag=True, help="Indented multi-line trees.")
@jobs_option
@sections_option
@click.pass_context
def transform(ctx, in_path, out_path, report, pretty, jobs, sections):
    """Rewrite ACC coordinations into ACC_X clusters under ACCPH_X."""
    config = RunConfig.build(
        command="transform",
        inputs=[in_path],
        output=out_path,
        report=report,
        pretty=pretty,
        jobs=_jobs(ctx, jobs),
    )
    trees = read_corpus(config.inputs[0], sections)
    out_trees, records = transform_corpus(trees, source=config.inputs[0].name, jobs=config.jobs)
    if config.output is None:
        click.echo(format_corpus(out_trees, config.pretty), nl=False)
    else:
        write_corpus(config.output, out_trees, config.pretty)
    if config.report is not None:
        payload = {
            "source": str(config.inputs[0]),
            "trees": len(out_trees),
            "candidates": len(records),
            "applied": sum(r.applied for r in records),
            "records": [r.model_dump(mode="json") for r in records],
        }
        write_text_atomic(config.report, dumps_json(payload))


@cli.command("detransform")
@click.option("--in", "in_path", required=True, help="Corpus in the ACC representation.")
@click.option("--out", "out_path", default=None, help="Output corpus (default stdout).")
@click.option("--pretty", is_flag=True, help="Indented multi-line trees.")
@sections_option
def detransform_command(in_path, out_path, pretty, sections):
    """Map ACC phrases back to co-indexed conjoined VPs."""
    config = RunConfig.build(command="detransform", inputs=[in_path], output=out_path, pretty=pretty)
    trees = [detransform(tree) for tree in read_corpus(config.inputs[0], sections)]
    _emit(format_corpus(trees, config.pretty), config.output)


def _detect_item(item: tuple[Tree, str]) -> list[dict]:
    tree, tree_id = item
    return [inst.to_record(tree_id) for inst in detect_all(tree)]


@cli.command()
@click.option("--in", "in_path", required=True, help="Bracketed corpus file or directory.")
@click.option("--out", "out_path", default=None, help="JSONL output (default stdout).")
@jobs_option
@sections_option
@click.pass_context
def detect(ctx, in_path, out_path, jobs, sections):
    """List ACC candidates with their accept/reject classification as JSONL."""
    config = RunConfig.build(
        command="detect", inputs=[in_path], output=out_path, jobs=_jobs(ctx, jobs)
    )
    trees = read_corpus(config.inputs[0], sections)
    source = config.inputs[0].name
    items = [(tree, f"{source}#{i}") for i, tree in enumerate(trees)]
    records = [r for rs in parallel_map(_detect_item, items, config.jobs) for r in rs]
    _emit(dumps_jsonl(records), config.output)


@cli.command()
@click.option("--in", "in_path", required=True, help="Bracketed corpus file or directory.")
@click.option("--out", "out_path", default=None, help="Report file (default stdout).")
@click.option("--format", "fmt", type=click.Choice(["json", "table"]), default="json")
@jobs_option
@sections_option
@click.pass_context
def stats(ctx, in_path, out_path, fmt, jobs, sections):
    """Census of ACC candidates, rejections and new labels."""
    config = RunConfig.build(
        command="stats", inputs=[in_path], output=out_path, jobs=_jobs(ctx, jobs)
    )
    report = census(read_corpus(config.inputs[0], sections), jobs=config.jobs)
    text = format_table(report) + "\n" if fmt == "table" else dumps_json(report.model_dump())
    _emit(text, config.output)


@cli.command("eval")
@click.option("--gold", required=True, help="Bracket-annotated gold sentences.")
@click.option("--pred", required=True, help="Predicted trees, one per gold sentence.")
@click.option(
    "--metrics",
    default="conjuncts,args,internal,accph",
    show_default=True,
    help=f"Comma-separated subset of {','.join(eval_constants['metrics'])}.",
)
@click.option("--gold-trees", default=None, help="Gold trees for the evalb metric.")
@click.option("--ptb-args", is_flag=True, help="Read plain conjuncts' children as arguments.")
@click.option("--exclude-acc", is_flag=True, help="EVALB: skip sentences whose gold tree has ACC.")
@click.option("--out", "out_path", default=None, help="JSON report (default stdout).")
def eval_command(gold, pred, metrics, gold_trees, ptb_args, exclude_acc, out_path):
    """Score predicted trees against coordination gold annotations."""
    config = RunConfig.build(
        command="eval",
        inputs=[gold, pred] + ([gold_trees] if gold_trees else []),
        output=out_path,
        metrics=[m.strip() for m in metrics.split(",") if m.strip()],
    )
    if "evalb" in config.metrics and gold_trees is None:
        raise click.UsageError("the evalb metric needs --gold-trees")

    golds = parse_gold(config.inputs[0].read_text(encoding="utf-8"))
    pred_trees = read_corpus(config.inputs[1])
    if len(golds) != len(pred_trees):
        raise TokenMismatchError(f"{len(golds)} gold sentences but {len(pred_trees)} trees")
    preds = [
        extract_predicted(tree, g.tokens, conjunct_args=ptb_args)
        for g, tree in zip(golds, pred_trees)
    ]
    reports = evaluate(golds, preds, config.metrics)
    payload: dict = {
        "gold": gold_summary(golds),
        "metrics": {name: report.model_dump() for name, report in reports.items()},
    }
    if "evalb" in config.metrics:
        score = labeled_bracket_f1(read_corpus(config.inputs[2]), pred_trees, exclude_acc=exclude_acc)
        payload["metrics"]["evalb"] = score._asdict()
    _emit(dumps_json(payload), config.output)


@cli.group()
def pcfg():
    """Extract, inspect and parse with treebank PCFGs."""


@pcfg.command()
@click.option("--in", "in_path", required=True, help="Training corpus.")
@click.option("--out", "out_path", required=True, help="Grammar JSON.")
@sections_option
def train(in_path, out_path, sections):
    """Extract a relative-frequency PCFG."""
    config = RunConfig.build(command="pcfg train", inputs=[in_path], output=out_path)
    grammar = extract_grammar(read_corpus(config.inputs[0], sections))
    grammar.save(config.output)


@pcfg.command()
@click.option("--grammar", "grammar_path", required=True, help="Grammar JSON.")
@click.option("--tokens", required=True, help="Space-separated sentence.")
@click.option("--pretty", is_flag=True, help="Indented multi-line tree.")
def parse(grammar_path, tokens, pretty):
    """Viterbi-parse one sentence."""
    config = RunConfig.build(command="pcfg parse", inputs=[grammar_path], pretty=pretty)
    result = cky_best(Grammar.load(config.inputs[0]), tokens.split())
    if result is None:
        click.secho("no parse", err=True, fg="yellow", color=_settings().color)
        return
    click.echo(serialize(result.tree, config.pretty))
    logger.info("log-probability %.4f", result.logp)


@pcfg.command()
@click.argument("first")
@click.argument("second")
@click.option("--format", "fmt", type=click.Choice(["json", "table"]), default="json")
def diff(first, second, fmt):
    """Rules unique to each grammar and shared-rule probability shifts."""
    config = RunConfig.build(command="pcfg diff", inputs=[first, second])
    result = rule_diff(Grammar.load(config.inputs[0]), Grammar.load(config.inputs[1]))
    if fmt == "json":
        click.echo(dumps_json(result.model_dump()), nl=False)
        return
    rows = [(rule, "first only") for rule in result.only_in_first]
    rows += [(rule, "second only") for rule in result.only_in_second]
    rows += [(s.rule, f"{s.first:.3f} -> {s.second:.3f}") for s in result.shifted]
    click.echo(tabulate(rows, headers=["rule", "change"]))


@pcfg.command()
@click.option("--grammar", "grammar_path", required=True, help="Grammar JSON.")
@click.option("--lhs", required=True, help="Category whose rules are listed.")
def rules(grammar_path, lhs):
    """List the rules (or lexical entries) rewriting a category."""
    config = RunConfig.build(command="pcfg rules", inputs=[grammar_path])
    grammar = Grammar.load(config.inputs[0])
    rows = [(str(r), f"{r.prob:.4f}") for r in rules_for(grammar, lhs)]
    rows += [
        (f"{lhs} -> {token}", f"{math.exp(logp):.4f}") for token, logp in lexicon_for(grammar, lhs)
    ]
    click.echo(tabulate(rows, headers=["rule", "prob"]))


def _settings() -> Settings:
    return Settings.from_env()


def _fail(message: str) -> None:
    click.secho(f"error: {message}", err=True, fg="red", color=_settings().color)


def main(argv: Sequence[str] | None = None) -> int:
    """Runs the CLI and maps failures to exit codes (1 input, 2 internal)."""
    try:
        cli.main(
            args=list(argv) if argv is not None else None,
            prog_name="acc-treekit",
            standalone_mode=False,
        )
    except click.ClickException as e:
        e.show()
        return 1
    except click.Abort:
        _fail("aborted")
        return 1
    except (InvariantViolation, AssertionError) as e:
        logger.exception("internal error")
        _fail(f"internal error: {e}")
        return 2
    except ValidationError as e:
        logger.exception("internal validation error")
        _fail(f"internal error: {e}")
        return 2
    except (AccTreekitError, OSError, ValueError) as e:
        _fail(str(e))
        return 1
    return 0


def run() -> None:
    sys.exit(main())
