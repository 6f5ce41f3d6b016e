"""
Subcommand handlers.

Each handler loads its inputs through the repositories, runs one analysis
and returns a CommandReport: text lines for stdout plus the artifacts it
wrote to the output directory.
"""

import logging
import random
from fractions import Fraction
from pathlib import Path
from typing import Any, Iterable, Optional, Sequence

from app.commands.parser import CommandParser, Grid
from app.config import Settings, get_settings
from app.exceptions import CommandError, PaperCheckFailure
from app.repositories import MapRepository, PointRepository, SftRepository
from app.schemas.interval import BoxSet, PiecewiseMap, fraction_text
from app.schemas.limits import ClosedSetSpec, StabilizationPolicy, WindowSet
from app.schemas.reports import CommandReport, PaperReport, RunConfig
from app.schemas.shadowing import AsymptoticSchedule, PseudoOrbitTail, TrajectoryTail
from app.schemas.symbolic import BlockGraph, TwoSidedPoint, Word, word_text
from app.services.construct_service import ConstructService
from app.services.interval_service import IntervalService
from app.services.limits_service import LimitsService
from app.services.paper_service import PaperService
from app.services.shadowing_service import ShadowingService
from app.services.witness_service import WitnessService
from app.utils.decorators import validate_input
from app.utils.emitters import csv_text, dot_text, json_text, write_artifact
from app.utils.validators import FieldValidators

logger = logging.getLogger(__name__)


class CommandHandler:
    """Handle all subcommands for one run configuration."""

    def __init__(self, config: RunConfig, settings: Optional[Settings] = None, corpus_dir: Optional[Path] = None):
        self.config = config
        self.settings = settings or get_settings()
        self.corpus_dir = Path(corpus_dir or self.settings.corpus_dir)
        self.output_dir = Path(config.output_dir)

        policy = StabilizationPolicy(
            initial=self.settings.stabilization_initial,
            budget=self.settings.stabilization_budget,
        )
        self.limits = LimitsService(policy=policy)
        self.symbolic = self.limits.symbolic
        self.specs = self.limits.specs
        self.shadowing = ShadowingService(self.symbolic)
        self.construct_service = ConstructService(self.limits)
        self.intervals = IntervalService(
            max_denominator_bits=self.settings.max_denominator_bits,
            max_pseudo_orbit_length=self.settings.max_pseudo_orbit_length,
        )

        self.sft_repo = SftRepository(self.corpus_dir, self.symbolic)
        self.map_repo = MapRepository(self.corpus_dir, self.intervals)
        self.point_repo = PointRepository(self.corpus_dir)

    # ------------------------------------------------------------------
    # Emission
    # ------------------------------------------------------------------

    def _emit(
        self,
        stem: str,
        columns: Sequence[str],
        rows: Iterable[Sequence[Any]],
        payload: dict[str, Any],
        graph: Optional[tuple[str, Iterable[str], Iterable[tuple[str, str]], Iterable[str]]] = None,
    ) -> str:
        fmt = self.config.output_format
        if fmt == "dot" and graph is not None:
            name, nodes, edges, highlighted = graph
            content, suffix = dot_text(self.config, name, nodes, edges, highlighted), "dot"
        elif fmt == "json":
            content, suffix = json_text(self.config, payload), "json"
        else:
            if fmt == "dot":
                logger.warning(f"{stem} has no graph form; writing CSV")
            content, suffix = csv_text(self.config, columns, rows), "csv"
        return str(write_artifact(self.output_dir, f"{stem}.{suffix}", content))

    @staticmethod
    def _graph_parts(graph: BlockGraph, highlighted: Iterable[Word] = ()):
        nodes = [word_text(v) for v in graph.vertices]
        edges = [(word_text(u), word_text(v)) for u, v in graph.edges]
        return nodes, edges, [word_text(v) for v in highlighted]

    def _resolution(self) -> int:
        k = self.config.resolution
        return self.settings.default_resolution if k is None else k

    # ------------------------------------------------------------------
    # Symbolic subcommands
    # ------------------------------------------------------------------

    def sft(self, source: str) -> CommandReport:
        """Language sizes for L = 1..k+1 and the block graph at the largest length."""
        sft = self.sft_repo.get(source)
        k = self._resolution()
        lines = [f"SFT {sft.name}: alphabet {' '.join(sft.alphabet.symbols)}, memory {sft.memory}"]
        if sft.pruned_symbols:
            lines.append(f"pruned symbols: {' '.join(sft.pruned_symbols)}")
        rows = []
        for L in range(1, k + 2):
            language = self.symbolic.language(sft, L)
            rows.append((L, language.size, " ".join(language.texts())))
            lines.append(f"L={L} size={language.size}")

        L = k + 1
        graph = self.symbolic.block_graph(self.symbolic.language(sft, L), self.symbolic.language(sft, L + 1))
        nodes, edges, _ = self._graph_parts(graph)
        artifact = self._emit(
            f"sft_{sft.name}",
            ("L", "size", "words"),
            rows,
            {"sft": sft.name, "language": [{"L": r[0], "size": r[1], "words": r[2].split()} for r in rows]},
            graph=(f"block_L{L}", nodes, edges, ()),
        )
        return CommandReport(lines=tuple(lines), artifacts=(artifact,), data={"sizes": [r[1] for r in rows]})

    def limits_cmd(self, reference: str, kinds: Sequence[str], policy_mode: str = "auto") -> CommandReport:
        """Limit window sets of a library point for L = 1..k+1."""
        point = self.point_repo.find_point(reference)
        policy = self.limits.policy.model_copy(update={"mode": policy_mode})
        k = self._resolution()
        rows, lines = [], [f"point {reference}"]
        for kind in kinds:
            for L in range(1, k + 2):
                windows = self.limits.limit_windows(point, kind, L, policy)
                rows.append((kind, L, windows.provenance.tag, windows.size, " ".join(windows.texts())))
                lines.append(f"{kind} {self.specs.describe(windows)}")
        artifact = self._emit(
            f"limits_{reference.replace(':', '_')}",
            ("kind", "L", "provenance", "size", "windows"),
            rows,
            {"point": reference, "windows": [dict(zip(("kind", "L", "provenance", "size", "windows"), r)) for r in rows]},
        )
        return CommandReport(lines=tuple(lines), artifacts=(artifact,))

    @validate_input(length=FieldValidators.validate_positive_int, count=FieldValidators.validate_positive_int)
    def shadow(
        self,
        source: str,
        direction: str,
        length: int,
        count: int = 1,
        two_sided_metric: bool = False,
        pseudo_orbit: Optional[str] = None,
    ) -> CommandReport:
        """Shadow seeded random pseudo-orbits (or one library pseudo-orbit) and re-verify each certificate."""
        sft = self.sft_repo.get(source)
        k = self._resolution()
        if pseudo_orbit is not None:
            library, _, name = pseudo_orbit.rpartition(":")
            orbits = [self.point_repo.get(library or "points").pseudo_orbit(name)]
        else:
            rng = random.Random(self.config.seed if self.config.seed is not None else self.settings.seed)
            j = k + sft.memory
            orbits = [
                self.shadowing.random_pseudo_orbit(sft, direction, j, length, rng, two_sided_metric)
                for _ in range(count)
            ]

        rows, certificates = [], []
        for index, po in enumerate(orbits):
            certificate = self.shadowing.shadow(sft, po, k)
            verified = self.shadowing.verify_certificate(sft, po, certificate)
            rows.append((index, po.direction, po.delta_exponent, len(po.entries), certificate.min_depth, verified))
            certificates.append(certificate.model_dump(mode="json"))
        failures = sum(not row[-1] for row in rows)
        lines = (
            f"SFT {sft.name}: {len(rows)} pseudo-orbit(s) at epsilon 2^-{k}, {failures} verification failure(s)",
        )
        artifact = self._emit(
            f"shadow_{sft.name}",
            ("index", "direction", "delta_exponent", "length", "min_depth", "verified"),
            rows,
            {"sft": sft.name, "certificates": certificates},
        )
        return CommandReport(lines=lines, artifacts=(artifact,), data={"failures": failures})

    def witness(self, reference: str, direction: Optional[str] = None) -> CommandReport:
        """
        Witness checks for the asymptotic pseudo-orbit obtained by truncating a
        library point's trajectory along the schedule 2^-(k + |i|).
        """
        point = self.point_repo.find_point(reference)
        two_sided = isinstance(point, TwoSidedPoint)
        direction = direction or ("backward" if two_sided else "forward")
        if direction == "backward" and not two_sided:
            raise CommandError("backward witnesses need a two-sided point")
        k = self._resolution()
        horizon = self.config.horizon if self.config.horizon is not None else self.settings.horizon

        schedule = AsymptoticSchedule(base=k, stride=1)
        pseudo = PseudoOrbitTail(source=point, schedule=schedule, two_sided_metric=two_sided)
        genuine = TrajectoryTail(point=point, two_sided_metric=two_sided)
        witnesses = WitnessService(self.limits, depth=self.settings.witness_depth)

        asymptotic = witnesses.verify_asymptotic(pseudo, schedule, horizon, direction)
        cofinal = witnesses.check_cofinal_orbital_witness(pseudo, genuine, k, 0, horizon, direction=direction)
        eventual = witnesses.check_eventual_strong_orbital_witness(pseudo, genuine, k, horizon, direction=direction)
        if direction == "backward":
            limit = witnesses.check_backward_orbital_limit_witness(pseudo, genuine, k + 1)
        else:
            limit = witnesses.check_forward_orbital_limit_witness(pseudo, genuine, k + 1)

        rows = [
            ("asymptotic", asymptotic.valid, asymptotic.first_failure),
            ("cofinal", cofinal.label, cofinal.value),
            ("eventual_strong", eventual.label, eventual.value),
            ("orbital_limit", limit, k + 1),
        ]
        lines = tuple(f"{direction} {name}: {verdict}" for name, verdict, _ in rows)
        artifact = self._emit(
            f"witness_{reference.replace(':', '_')}",
            ("check", "verdict", "value"),
            rows,
            {"point": reference, "direction": direction, "checks": [dict(zip(("check", "verdict", "value"), r)) for r in rows]},
        )
        return CommandReport(lines=lines, artifacts=(artifact,), data={"cofinal": cofinal.found, "limit": limit})

    def _spec_from_inputs(
        self,
        source: Optional[str],
        windows: Optional[str],
        spikes: Optional[str],
        two_sided: bool,
    ) -> ClosedSetSpec:
        given = [value for value in (source, windows, spikes) if value]
        if len(given) != 1:
            raise CommandError("give exactly one of an SFT file, --windows or --spikes")
        if source:
            return self.specs.language_spec(self.sft_repo.get(source), two_sided)
        if windows:
            words = CommandParser.parse_windows(windows)
            allowed = WindowSet(L=len(words[0]), words=frozenset(words))
            return self.specs.windows_spec(allowed, two_sided, name=f"windows({windows})")
        base, _, symbols = spikes.partition(":")
        if len(base) != 1 or not symbols:
            raise CommandError(f"--spikes expects base:symbols such as 0:12, got {spikes!r}")
        return self.specs.spike_spec(base, symbols, two_sided)

    def ict(
        self,
        source: Optional[str] = None,
        windows: Optional[str] = None,
        spikes: Optional[str] = None,
        two_sided: bool = False,
    ) -> CommandReport:
        """Chain transitivity up to resolution k and the maximal classes at k."""
        spec = self._spec_from_inputs(source, windows, spikes, two_sided)
        k = self._resolution()
        failing = self.limits.is_ict_upto(spec, k)
        classes = self.limits.enumerate_maximal_ict_spec(spec, k)
        verdict = f"chain transitive for every k <= {k}" if failing is None else f"not chain transitive at k={failing}"
        lines = [f"{spec.name}: {verdict}"]
        lines.extend(f"class {i}: {self.specs.describe(c)}" for i, c in enumerate(classes))

        L = spec.window_length(k)
        graph = self.limits.spec_block_graph(spec, L)
        nodes, edges, marked = self._graph_parts(graph, classes[0].words if classes else ())
        artifact = self._emit(
            "ict",
            ("class", "L", "size", "windows"),
            [(i, c.L, c.size, " ".join(c.texts())) for i, c in enumerate(classes)],
            {"spec": spec.name, "first_failure": failing, "classes": [c.texts() for c in classes]},
            graph=(f"block_L{L}", nodes, edges, marked),
        )
        return CommandReport(lines=tuple(lines), artifacts=(artifact,), data={"first_failure": failing})

    @validate_input(length=FieldValidators.validate_positive_int)
    def construct(
        self,
        length: int,
        full: bool = False,
        source: Optional[str] = None,
        windows: Optional[str] = None,
        spikes: Optional[str] = None,
    ) -> CommandReport:
        """Build a point realizing the spec and write its symbol stream and certificate."""
        spec = self._spec_from_inputs(source, windows, spikes, False)
        K = self._resolution()
        if full:
            result = self.construct_service.build_full_trajectory(spec, K, length)
            stream = word_text(result.central_window)
            header = f"# window starts at index {result.window_start}\n"
        else:
            result = self.construct_service.build_limit_point(spec, K, length)
            stream = word_text(result.prefix)
            header = ""
        certificate = result.certificate
        config_header = "".join(f"# {key}={value}\n" for key, value in self.config.header_items())
        stream_path = write_artifact(self.output_dir, "construct_stream.txt", config_header + header + stream + "\n")
        certificate_path = write_artifact(
            self.output_dir,
            "construct_certificate.json",
            json_text(self.config, {"spec": spec.name, "certificate": certificate.model_dump(mode="json")}),
        )
        lines = (
            f"{spec.name}: {'full trajectory' if full else 'limit point'} at K={K}, certificate valid={certificate.valid}",
        )
        return CommandReport(
            lines=lines,
            artifacts=(str(stream_path), str(certificate_path)),
            data={"valid": certificate.valid},
        )

    # ------------------------------------------------------------------
    # Interval subcommand
    # ------------------------------------------------------------------

    def _box_rows(self, fmap: PiecewiseMap, boxes: BoxSet) -> list[tuple[int, str, str]]:
        return [
            (i, *(fraction_text(v) for v in self.intervals.box_bounds(fmap, i, boxes.h)))
            for i in boxes.sorted_boxes()
        ]

    def interval(
        self,
        source: str,
        operation: str,
        x: Optional[Fraction] = None,
        depth: int = 12,
        points: Sequence[Fraction] = (),
        epsilon: Fraction = Fraction(1, 3),
        delta: Fraction = Fraction(1, 64),
        grid: Optional[Grid] = None,
    ) -> CommandReport:
        fmap = self.map_repo.get(source)
        grid = grid or Grid(Fraction(1, 32), Fraction(1, 64))

        if operation == "eval":
            CommandParser.require(x, "--x", "eval")
            orbit = self.intervals.orbit(fmap, x, depth)
            rows = [(i, fraction_text(v)) for i, v in enumerate(orbit)]
            lines = [f"f^{i}({fraction_text(x)}) = {v}" for i, v in rows]
            artifact = self._emit("interval_orbit", ("n", "value"), rows, {"orbit": [v for _, v in rows]})
            return CommandReport(lines=tuple(lines), artifacts=(artifact,))

        if operation == "preimages":
            CommandParser.require(x, "--x", "preimages")
            found = self.intervals.preimages(fmap, x)
            rows = [("point", fraction_text(p)) for p in found.points] + [("interval", i.text) for i in found.intervals]
            lines = [f"f^-1({fraction_text(x)}): " + (", ".join(value for _, value in rows) or "empty")]
            artifact = self._emit("interval_preimages", ("kind", "value"), rows, found.model_dump(mode="json"))
            return CommandReport(lines=tuple(lines), artifacts=(artifact,))

        if operation in ("a1", "a2", "a3"):
            CommandParser.require(x, "--x", operation)
            if operation == "a1":
                boxes = self.intervals.neg_limit_a1(fmap, x, depth, grid.h)
            else:
                boxes = self.intervals.neg_limit_trajectories(fmap, x, operation.upper(), depth, grid.h)
            return self._box_report(fmap, boxes, f"interval_{operation}")

        if operation == "omega":
            CommandParser.require(x, "--x", "omega")
            boxes = self.intervals.omega_boxes(fmap, (x, *points), depth, grid.h)
            return self._box_report(fmap, boxes, "interval_omega")

        if operation == "chain":
            boxes = self.intervals.chain_recurrent_outer(fmap, grid.h, grid.fatten)
            return self._box_report(fmap, boxes, "interval_chain_recurrent")

        if operation == "ict":
            if not points:
                raise CommandError("ict needs --points")
            ok = self.intervals.box_level_ict(fmap, points, grid.h, grid.fatten)
            line = f"{{{', '.join(fraction_text(p) for p in points)}}} box-level chain transitive: {ok}"
            return CommandReport(lines=(line,), data={"ict": ok})

        if operation == "falsify":
            certificate = self.intervals.falsify_shadowing_ex44(fmap, epsilon, delta)
            rechecked = self.intervals.recheck_falsification(fmap, certificate)
            artifact = write_artifact(
                self.output_dir,
                "interval_falsification.json",
                json_text(self.config, {"certificate": certificate.model_dump(mode="json"), "rechecked": rechecked}),
            )
            lines = (
                f"pseudo-orbit of length {len(certificate.entries)} ({certificate.mode}), "
                f"max jump {fraction_text(certificate.max_jump)}",
                f"not shadowable: {certificate.not_shadowable}; independent recheck: {rechecked}",
            )
            return CommandReport(lines=lines, artifacts=(str(artifact),), data={"valid": rechecked})

        raise CommandError(f"unknown interval operation {operation!r}")

    def _box_report(self, fmap: PiecewiseMap, boxes: BoxSet, stem: str) -> CommandReport:
        line = f"{boxes.label} [{boxes.provenance.tag}] h={fraction_text(boxes.h)}: {boxes.sorted_boxes()}"
        artifact = self._emit(
            stem,
            ("box", "lo", "hi"),
            self._box_rows(fmap, boxes),
            {"boxes": boxes.model_dump(mode="json")},
        )
        return CommandReport(lines=(line,), artifacts=(artifact,), data={"boxes": boxes.sorted_boxes()})

    # ------------------------------------------------------------------
    # Example reproduction
    # ------------------------------------------------------------------

    def verify_paper(self, only: Optional[str] = None, jobs: int = 1) -> CommandReport:
        """Run the example checks; write the table, then fail if any check failed."""
        service = PaperService(
            self.corpus_dir,
            limits=self.limits,
            construct=self.construct_service,
            intervals=self.intervals,
            jobs=jobs,
        )
        report: PaperReport = service.verify(only)
        rows = [
            (r.example_id, r.name, r.tag, r.claim, r.computed, r.provenance, "PASS" if r.passed else "FAIL")
            for r in report.results
        ]
        lines = [f"[{row[-1]}] {row[0]} {row[1]} ({row[2]}): {row[4]}" for row in rows]
        artifact = self._emit(
            "verify_paper",
            ("example", "check", "tag", "claim", "computed", "provenance", "result"),
            rows,
            {"results": [r.model_dump(mode="json") for r in report.results]},
        )
        if not report.passed:
            lines.append(f"{len(report.failed)} of {len(rows)} check(s) failed")
            lines.append(f"wrote {artifact}")
            raise PaperCheckFailure(report.failed, lines=tuple(lines))
        lines.append(f"{len(rows)} check(s) passed")
        return CommandReport(lines=tuple(lines), artifacts=(artifact,))
