"""Command-line pipeline: synth, pairs, train, eval, bench, show-selected.

Every command is deterministic given its flags (seeds included); reruns write
byte-identical artifacts except for wall-clock columns in the bench report.
Exit codes: 0 success, 2 usage or parameter problems, 3 algorithmic failure
(the redundancy filter or feature pool ran out of admissible stumps).
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import replace
from pathlib import Path

import numpy as np

from .boosting import (
    BoostConfig,
    cost_estimate,
    load_model,
    save_model,
    save_trajectory,
    train_ab,
    train_pab,
)
from .dataio import (
    ManifestEntry,
    SyntheticSpec,
    generate_synthetic,
    load_pgm,
    read_manifest,
    save_pgm,
    split_dataset,
    write_manifest,
)
from .errors import (
    CapacityError,
    GaborBoostError,
    ParameterError,
    PgmFormatError,
    SelectionExhaustedError,
)
from .gabor import (
    FeatureLayout,
    GaborBankConfig,
    extract_features,
    extract_selected,
    load_bank_config,
    make_bank,
)
from .pairs import GallerySample, build_pairs, load_training_set, save_training_set
from .recognize import GalleryIndex, evaluate

__all__ = ["main", "run"]


def _add_bank_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("filter bank")
    group.add_argument("--config", help="bank config file (key = value lines)")
    group.add_argument("--f-max", type=float, help="peak frequency, cycles/pixel")
    group.add_argument("--gamma", type=float, help="frequency/sharpness ratio, wave axis")
    group.add_argument("--eta", type=float, help="frequency/sharpness ratio, cross axis")
    group.add_argument("--scales", type=int, help="number of scales")
    group.add_argument("--orientations", type=int, help="number of orientations")
    group.add_argument("--radius", type=int, help="kernel radius in pixels")
    group.add_argument("--step", type=int, help="feature grid stride in pixels")


def _bank_config(args: argparse.Namespace) -> GaborBankConfig:
    config = load_bank_config(args.config) if args.config else GaborBankConfig()
    overrides = {
        "f_max": args.f_max,
        "gamma": args.gamma,
        "eta": args.eta,
        "num_scales": args.scales,
        "num_orientations": args.orientations,
        "kernel_radius": args.radius,
        "downsample_step": args.step,
    }
    overrides = {k: v for k, v in overrides.items() if v is not None}
    return replace(config, **overrides) if overrides else config


def _out_stream(args: argparse.Namespace):
    if getattr(args, "out", None):
        return open(args.out, "w")
    return sys.stdout


def _load_images(
    entries: list[ManifestEntry], layout: FeatureLayout | None = None
) -> list[tuple[ManifestEntry, np.ndarray]]:
    loaded = []
    shape = (layout.height, layout.width) if layout else None
    for entry in entries:
        image = load_pgm(entry.path)
        if shape is None:
            shape = image.shape
        if image.shape != shape:
            have = f"width={image.shape[1]} height={image.shape[0]}"
            want = layout.descriptor() if layout else f"width={shape[1]} height={shape[0]}"
            raise ParameterError(
                f"{entry.path}: image geometry ({have}) does not match ({want})"
            )
        loaded.append((entry, image))
    return loaded


def _extract_gallery(
    entries: list[ManifestEntry], config: GaborBankConfig
) -> tuple[list[GallerySample], FeatureLayout]:
    loaded = _load_images(entries)
    height, width = loaded[0][1].shape
    layout = FeatureLayout.for_image(config, width=width, height=height)
    bank = make_bank(config)
    samples = [
        GallerySample(e.identity, str(e.path), extract_features(img, bank, config.downsample_step))
        for e, img in loaded
    ]
    return samples, layout


def _training_entries(entries: list[ManifestEntry]) -> list[ManifestEntry]:
    picked = [e for e in entries if e.split in ("train", "gallery")]
    if not picked:
        raise ParameterError("manifest has no train or gallery entries")
    return picked


def _default_pair_counts(entries: list[ManifestEntry]) -> tuple[int, int]:
    """All intra pairs, and eight extras per intra (capped by availability)."""
    per_identity: dict[str, int] = {}
    for e in entries:
        per_identity[e.identity] = per_identity.get(e.identity, 0) + 1
    n = len(entries)
    intra = sum(k * (k - 1) // 2 for k in per_identity.values())
    extra = n * (n - 1) // 2 - intra
    if intra < 1 or extra < 1:
        raise CapacityError(
            "gallery cannot form both pair classes"
            f" ({intra} intra, {extra} extra pairs available)"
        )
    return intra, min(8 * intra, extra)


def _parse_dims(text: str) -> list[int]:
    try:
        dims = [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise ParameterError(f"bad dims list {text!r}") from None
    if not dims:
        raise ParameterError("dims list is empty")
    return dims


def cmd_synth(args: argparse.Namespace) -> int:
    spec = SyntheticSpec(
        num_identities=args.ids,
        images_per_identity=args.per_id,
        image_size=args.size,
        noise_sigma=args.noise,
        seed=args.seed,
    )
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    dataset = generate_synthetic(spec)
    entries = []
    counter: dict[str, int] = {}
    for identity, image in dataset:
        k = counter.get(identity, 0)
        counter[identity] = k + 1
        name = f"{identity}_{k:02d}.pgm"
        save_pgm(out / name, image)
        entries.append(ManifestEntry(identity, out / name, "train"))
    if args.gallery_per_id is not None:
        entries = split_dataset(entries, args.gallery_per_id, args.split_seed)
    write_manifest(entries, out / "manifest.tsv", relative_to=out)
    print(f"wrote {len(entries)} images and manifest.tsv to {out}")
    return 0


def cmd_pairs(args: argparse.Namespace) -> int:
    config = _bank_config(args)
    entries = _training_entries(read_manifest(args.manifest))
    gallery, layout = _extract_gallery(entries, config)
    num_intra, num_extra = args.num_intra, args.num_extra
    if num_intra is None or num_extra is None:
        default_intra, default_extra = _default_pair_counts(entries)
        num_intra = num_intra if num_intra is not None else default_intra
        num_extra = num_extra if num_extra is not None else default_extra
    tset = build_pairs(gallery, num_intra, num_extra, args.seed)
    tset.layout = layout
    save_training_set(tset, args.out)
    print(f"wrote {len(tset)} samples ({num_intra} intra, {num_extra} extra) to {args.out}")
    return 0


def _train_config(args: argparse.Namespace) -> BoostConfig:
    if args.mode == "pab-mi":
        if args.S is None:
            raise ParameterError("mode pab-mi requires --S")
        serial = args.S
    else:
        serial = args.T
    delta = float("inf") if args.mode == "ab" else args.delta_mi
    return BoostConfig(
        total_rounds=args.T,
        serial_rounds=serial,
        mi_threshold=delta,
        seed=args.seed,
    )


def cmd_train(args: argparse.Namespace) -> int:
    cfg = _train_config(args)
    if args.pairs:
        tset = load_training_set(args.pairs)
        layout = tset.layout
    else:
        if not args.manifest:
            raise ParameterError("train needs --manifest or --pairs")
        config = _bank_config(args)
        entries = _training_entries(read_manifest(args.manifest))
        gallery, layout = _extract_gallery(entries, config)
        num_intra, num_extra = args.num_intra, args.num_extra
        if num_intra is None or num_extra is None:
            default_intra, default_extra = _default_pair_counts(entries)
            num_intra = num_intra if num_intra is not None else default_intra
            num_extra = num_extra if num_extra is not None else default_extra
        tset = build_pairs(gallery, num_intra, num_extra, args.seed)

    mi_active = np.isfinite(cfg.mi_threshold)

    def log(r, h, eps, c, max_mi):
        line = f"{r}\t{h.feature_index}\t{eps:.6f}\t{c:.6f}"
        if mi_active:
            line += f"\t{max_mi:.6f}"
        print(line)

    if args.mode == "pab-mi":
        result = train_pab(
            tset,
            cfg,
            layout=layout,
            workers=args.workers,
            log=log,
            record_trajectory=bool(args.dump_trajectory),
        )
    else:
        result = train_ab(
            tset, cfg, layout=layout, log=log,
            record_trajectory=bool(args.dump_trajectory),
        )
    if args.dump_trajectory:
        model, trajectory = result
        save_trajectory(trajectory, cfg.seed, args.dump_trajectory)
    else:
        model = result
    save_model(model, args.out)
    print(f"wrote {len(model)}-round model to {args.out}")
    return 0


def _eval_features(
    model, manifest_path: str
) -> tuple[GalleryIndex, list[tuple[str, np.ndarray]], list[str]]:
    if model.layout is None:
        raise ParameterError("model carries no feature layout; cannot extract probes")
    layout = model.layout
    config = layout.bank_config()
    entries = read_manifest(manifest_path)
    gallery_entries = [e for e in entries if e.split == "gallery"]
    probe_entries = [e for e in entries if e.split == "probe"]
    if not gallery_entries:
        raise ParameterError("manifest has no gallery entries")
    if not probe_entries:
        raise ParameterError("manifest has no probe entries")
    selection = model.selection

    def selected_features(batch):
        loaded = _load_images(batch, layout)
        return [
            (e, extract_selected(img, selection, config)) for e, img in loaded
        ]

    gallery = selected_features(gallery_entries)
    probes = selected_features(probe_entries)
    index = GalleryIndex(
        identities=[e.identity for e, _ in gallery],
        vectors=np.asarray([v for _, v in gallery]),
        selection=selection,
    )
    probe_list = [(e.identity, v) for e, v in probes]
    probe_names = [e.path.name for e, _ in probes]
    return index, probe_list, probe_names


def cmd_eval(args: argparse.Namespace) -> int:
    model = load_model(args.model)
    dims = _parse_dims(args.dims)
    for k in dims:
        if k > len(model):
            raise ParameterError(f"dimension {k} exceeds model rounds ({len(model)})")
    index, probes, probe_names = _eval_features(model, args.manifest)
    report = evaluate(index, probes, dims, workers=args.workers)
    stream = _out_stream(args)
    for k, acc in report.accuracies:
        print(f"{k}\t{acc:.2f}", file=stream)
    if stream is not sys.stdout:
        stream.close()
    if args.per_probe:
        top = dims[-1]
        with open(args.per_probe, "w") as fh:
            fh.write("probe,predicted,actual,distance\n")
            for name, (predicted, actual, dist) in zip(
                probe_names, report.decisions[top]
            ):
                fh.write(f"{name},{predicted},{actual},{dist:.6f}\n")
    return 0


def cmd_bench(args: argparse.Namespace) -> int:
    serial_grid = _parse_dims(args.S)
    for s in serial_grid:
        if s > args.T:
            raise ParameterError(f"serial rounds {s} exceeds total rounds {args.T}")
    dims = (
        _parse_dims(args.dims)
        if args.dims
        else list(range(20, min(args.T, 200) + 1, 20))
    )
    for k in dims:
        if k > args.T:
            raise ParameterError(f"dimension {k} exceeds total rounds {args.T}")

    config = _bank_config(args)
    entries = read_manifest(args.manifest)
    train_entries = _training_entries(entries)
    gallery, layout = _extract_gallery(train_entries, config)
    num_intra, num_extra = args.num_intra, args.num_extra
    if num_intra is None or num_extra is None:
        default_intra, default_extra = _default_pair_counts(train_entries)
        num_intra = num_intra if num_intra is not None else default_intra
        num_extra = num_extra if num_extra is not None else default_extra
    tset = build_pairs(gallery, num_intra, num_extra, args.seed)

    gallery_entries = [e for e in entries if e.split == "gallery"]
    probe_entries = [e for e in entries if e.split == "probe"]
    if not gallery_entries or not probe_entries:
        raise ParameterError("bench manifest needs gallery and probe entries")

    def accuracies(model) -> list[float]:
        selection = model.selection
        bank_config = model.layout.bank_config()
        gal = [
            (e, extract_selected(img, selection, bank_config))
            for e, img in _load_images(gallery_entries, model.layout)
        ]
        prb = [
            (e, extract_selected(img, selection, bank_config))
            for e, img in _load_images(probe_entries, model.layout)
        ]
        index = GalleryIndex(
            identities=[e.identity for e, _ in gal],
            vectors=np.asarray([v for _, v in gal]),
            selection=selection,
        )
        report = evaluate(
            index, [(e.identity, v) for e, v in prb], dims, workers=args.workers
        )
        return [acc for _, acc in report.accuracies]

    stream = _out_stream(args)
    acc_heads = "\t".join(f"acc@{k}" for k in dims)
    print(
        f"# S\t{acc_heads}\tserial_seconds\tparallel_seconds\tcost_serial\tcost_parallel",
        file=stream,
    )

    reference_cfg = BoostConfig(
        total_rounds=args.T,
        serial_rounds=args.T,
        mi_threshold=args.delta_mi,
        seed=args.seed,
    )
    started = time.perf_counter()
    reference = train_ab(tset, reference_cfg, layout=layout)
    reference_seconds = time.perf_counter() - started
    ref_acc = accuracies(reference)
    ref_cost = cost_estimate(reference_cfg, args.workers)
    acc_cells = "\t".join(f"{a:.2f}" for a in ref_acc)
    print(
        f"ab-mi\t{acc_cells}\t{reference_seconds:.3f}\t0.000"
        f"\t{ref_cost[0]}\t{ref_cost[1]}",
        file=stream,
    )

    for s in serial_grid:
        cfg = BoostConfig(
            total_rounds=args.T,
            serial_rounds=s,
            mi_threshold=args.delta_mi,
            seed=args.seed,
        )
        model, stats = train_pab(
            tset, cfg, layout=layout, workers=args.workers, record_stats=True
        )
        acc = accuracies(model)
        cost = cost_estimate(cfg, args.workers)
        acc_cells = "\t".join(f"{a:.2f}" for a in acc)
        print(
            f"{s}\t{acc_cells}\t{stats.serial_seconds:.3f}"
            f"\t{stats.parallel_seconds:.3f}\t{cost[0]}\t{cost[1]}",
            file=stream,
        )
    if stream is not sys.stdout:
        stream.close()
    return 0


def cmd_show_selected(args: argparse.Namespace) -> int:
    model = load_model(args.model)
    if model.layout is None:
        raise ParameterError("model carries no feature layout; cannot decode indices")
    layout = model.layout
    stream = _out_stream(args)
    for round_index, (h, c) in enumerate(model.rounds, start=1):
        u, v, row, col = layout.decode(h.feature_index)
        x, y = col * layout.step, row * layout.step
        print(f"{round_index}\t{u}\t{v}\t{x}\t{y}\t{c:.17g}", file=stream)
    if stream is not sys.stdout:
        stream.close()
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gaborboost",
        description="Gabor wavelet selection by boosting, and face recognition on the result",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a synthetic identity dataset")
    p.add_argument("--ids", type=int, required=True, help="number of identities")
    p.add_argument("--per-id", type=int, required=True, help="images per identity")
    p.add_argument("--size", type=int, default=64, help="image side in pixels")
    p.add_argument("--noise", type=float, default=0.05, help="pixel noise sigma")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument(
        "--gallery-per-id",
        type=int,
        help="also split: tag this many images per identity as gallery, rest probe",
    )
    p.add_argument("--split-seed", type=int, default=0)
    p.set_defaults(handler=cmd_synth)

    p = sub.add_parser("pairs", help="build and persist the difference-pair training set")
    p.add_argument("--manifest", required=True)
    p.add_argument("--num-intra", type=int)
    p.add_argument("--num-extra", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output pairs file")
    _add_bank_flags(p)
    p.set_defaults(handler=cmd_pairs)

    p = sub.add_parser("train", help="select wavelets by boosting")
    p.add_argument("--manifest")
    p.add_argument("--pairs", help="train from a persisted pairs file instead")
    p.add_argument("--mode", choices=("ab", "ab-mi", "pab-mi"), required=True)
    p.add_argument("--T", type=int, required=True, help="total rounds")
    p.add_argument("--S", type=int, help="serial rounds (pab-mi)")
    p.add_argument("--delta-mi", type=float, default=0.2, help="redundancy threshold, bits")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--num-intra", type=int)
    p.add_argument("--num-extra", type=int)
    p.add_argument("--out", required=True, help="output model file")
    p.add_argument("--dump-trajectory", help="also write the serial weight history")
    _add_bank_flags(p)
    p.set_defaults(handler=cmd_train)

    p = sub.add_parser("eval", help="rank-1 recognition rates of a trained model")
    p.add_argument("--model", required=True)
    p.add_argument("--manifest", required=True)
    p.add_argument("--dims", required=True, help="comma-separated feature counts")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", help="write the table here instead of stdout")
    p.add_argument("--per-probe", help="also write per-probe decisions (CSV)")
    p.set_defaults(handler=cmd_eval)

    p = sub.add_parser("bench", help="compare serial and parallel training")
    p.add_argument("--manifest", required=True)
    p.add_argument("--S", required=True, help="comma-separated serial-round counts")
    p.add_argument("--T", type=int, required=True)
    p.add_argument("--delta-mi", type=float, default=0.2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--dims", help="comma-separated feature counts (default 20,40,..)")
    p.add_argument("--num-intra", type=int)
    p.add_argument("--num-extra", type=int)
    p.add_argument("--out", help="write the report here instead of stdout")
    _add_bank_flags(p)
    p.set_defaults(handler=cmd_bench)

    p = sub.add_parser("show-selected", help="decode a model's selected wavelets")
    p.add_argument("--model", required=True)
    p.add_argument("--out", help="write the listing here instead of stdout")
    p.set_defaults(handler=cmd_show_selected)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    try:
        return args.handler(args)
    except SelectionExhaustedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ParameterError, CapacityError, PgmFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except GaborBoostError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def run() -> None:
    raise SystemExit(main())
