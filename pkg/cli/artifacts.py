"""Solver artifacts on disk: profiles.csv, events.jsonl, solution.json and friends."""

import csv
import json
import math
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

from core import ArtifactError, format_float, get_file_hash, get_logger, parse_float
from flux import SpaceTimeFlux, plc_approximate
from stepfn import GridStepFunction, StepFunction
from tracker import (
    Domain, EventRecord, FluxSegment, Front, GridData, Snapshot, Solution
)

logger = get_logger(__name__)

PROFILES = 'profiles.csv'
EVENTS = 'events.jsonl'
SOLUTION = 'solution.json'
BOUNDS = 'bounds.json'


# -- profiles -------------------------------------------------------------

def profile_times(solution: Solution, extra: Iterable[float] = ()) -> List[float]:
    """Every event time, the horizon, t = 0 and any extra sample times."""
    times = {0.0, solution.horizon}
    times.update(solution.snapshot_times)
    times.update(t for t in extra if 0.0 <= t <= solution.horizon)
    return sorted(times)


def write_profiles(path: Path, profiles: Sequence[Tuple[float, StepFunction]]) -> None:
    """One row per time: t, u on the first piece, then breakpoint/value pairs."""
    with open(path, 'w', newline='', encoding='utf-8') as fh:
        writer = csv.writer(fh)
        for t, u in profiles:
            row = [format_float(t), format_float(u.values[0])]
            for x, v in zip(u.breakpoints, u.values[1:]):
                row += [format_float(x), format_float(v)]
            writer.writerow(row)


def read_profiles(path: Path, end: float = math.inf) -> List[Tuple[float, StepFunction]]:
    """Inverse of write_profiles; the domain end is not stored in the rows."""
    profiles = []
    try:
        with open(path, newline='', encoding='utf-8') as fh:
            for lineno, row in enumerate(csv.reader(fh), start=1):
                if not row:
                    continue
                if len(row) % 2 != 0:
                    raise ArtifactError(f"{path}:{lineno}: expected t, value and breakpoint/value pairs")
                numbers = [parse_float(cell) for cell in row]
                t, values, breaks = numbers[0], [numbers[1]], []
                for i in range(2, len(numbers), 2):
                    breaks.append(numbers[i])
                    values.append(numbers[i + 1])
                profiles.append((t, StepFunction(0.0, end, tuple(breaks), tuple(values))))
    except OSError as e:
        raise ArtifactError(f"cannot read {path}: {e}") from e
    except ValueError as e:
        raise ArtifactError(f"{path}: malformed profile: {e}") from e
    return profiles


# -- events ---------------------------------------------------------------

def _front_from_list(item: Sequence[Any]) -> Front:
    fid, x0, t0, left, right, speed = item
    return Front(int(fid), float(x0), float(t0), int(left), int(right), float(speed))


def _fronts_to_list(fronts: Sequence[Front]) -> List[List[Any]]:
    return [[f.id, f.x0, f.t0, f.left, f.right, f.speed] for f in fronts]


def write_events(path: Path, solution: Solution) -> None:
    with open(path, 'w', encoding='utf-8') as fh:
        for record in solution.events:
            fh.write(json.dumps(record.to_dict(solution.eps)) + '\n')


def _record_from_dict(item: Dict[str, Any], eps: float) -> EventRecord:
    return EventRecord(
        time=float(item['time']),
        kinds=tuple(item['kinds']),
        position=float(item['position']),
        v_pre=int(round(item['V_pre'] / eps)),
        v_post=int(round(item['V_post'] / eps)),
        sharp_pre=float(item['sharp_pre']),
        sharp_post=float(item['sharp_post']),
        fronts_pre=int(item['fronts_pre']),
        fronts_post=int(item['fronts_post']),
        fans=tuple((float(x), tuple(tuple(w) for w in waves)) for x, waves in item['fans']),
        fronts=tuple(_front_from_list(f) for f in item['fronts']),
        trace=int(item['trace']),
    )


def read_events(path: Path, eps: float) -> List[EventRecord]:
    records = []
    try:
        with open(path, encoding='utf-8') as fh:
            for lineno, line in enumerate(fh, start=1):
                if not line.strip():
                    continue
                try:
                    records.append(_record_from_dict(json.loads(line), eps))
                except (ValueError, KeyError, TypeError) as e:
                    raise ArtifactError(f"{path}:{lineno}: malformed event record: {e}") from e
    except OSError as e:
        raise ArtifactError(f"cannot read {path}: {e}") from e
    return records


# -- solution header ------------------------------------------------------

def _grid_to_dict(g: Optional[GridStepFunction]) -> Optional[Dict[str, Any]]:
    if g is None:
        return None
    return {'start': g.start, 'end': g.end, 'breakpoints': list(g.breakpoints), 'indices': list(g.indices)}


def _grid_from_dict(item: Optional[Dict[str, Any]], eps: float) -> Optional[GridStepFunction]:
    if item is None:
        return None
    return GridStepFunction(eps, float(item['start']), float(item['end']),
                            tuple(float(x) for x in item['breakpoints']),
                            tuple(int(k) for k in item['indices']))


def _snapshot_to_dict(s: Snapshot) -> Dict[str, Any]:
    return {'time': s.time, 'trace': s.trace, 'fronts': _fronts_to_list(s.fronts)}


def _snapshot_from_dict(item: Dict[str, Any]) -> Snapshot:
    return Snapshot(float(item['time']), tuple(_front_from_list(f) for f in item['fronts']), int(item['trace']))


def _is_event_snapshot(s: Snapshot, record: EventRecord) -> bool:
    return s.time == record.time and s.trace == record.trace and s.fronts == record.fronts


def write_solution(path: Path, solution: Solution) -> None:
    """Everything besides the events needed to rebuild the solution: data, slabs and non-event snapshots."""
    starts = []
    consumed = 0
    for s in solution.snapshots[1:]:
        if consumed < len(solution.events) and _is_event_snapshot(s, solution.events[consumed]):
            consumed += 1
        else:
            starts.append(dict(_snapshot_to_dict(s), after=consumed))
    data = solution.data
    payload = {
        'eps': solution.eps,
        'horizon': solution.horizon,
        'domain': {'kind': solution.domain.kind, 'length': solution.domain.length},
        'data': {
            'u_o': _grid_to_dict(data.u_o), 'u_b': _grid_to_dict(data.u_b), 'u_b2': _grid_to_dict(data.u_b2),
            'jump_left': data.jump_left, 'jump_right': data.jump_right, 'hull': list(data.hull),
        },
        'segments': [{'t_start': s.t_start, 't_end': s.t_end, 't_frozen': s.flux.t_frozen} for s in solution.segments],
        'initial': _snapshot_to_dict(solution.snapshots[0]),
        'slab_starts': starts,
        'glimm_initial': solution.glimm[0][1] * solution.eps,
        'metadata': {k: v for k, v in solution.metadata.items() if isinstance(v, (int, float, str, list))},
    }
    path.write_text(json.dumps(payload, indent=2), encoding='utf-8')


def read_solution_header(path: Path) -> Dict[str, Any]:
    try:
        return json.loads(Path(path).read_text(encoding='utf-8'))
    except OSError as e:
        raise ArtifactError(f"cannot read {path}: {e}") from e
    except ValueError as e:
        raise ArtifactError(f"{path}: malformed solution header: {e}") from e


def solution_from_events(header: Dict[str, Any], events: List[EventRecord], flux: SpaceTimeFlux) -> Solution:
    """Rebuild a Solution from its header and event log, with PLC fluxes rebuilt from the given flux."""
    try:
        eps = float(header['eps'])
        horizon = float(header['horizon'])
        dom = header['domain']
        domain = Domain(dom['kind'], dom['length'])
        d = header['data']
        data = GridData(eps, _grid_from_dict(d['u_o'], eps), _grid_from_dict(d['u_b'], eps),
                        _grid_from_dict(d['u_b2'], eps), float(d['jump_left']), float(d['jump_right']),
                        (float(d['hull'][0]), float(d['hull'][1])))
        segments = [FluxSegment(float(s['t_start']), float(s['t_end']),
                                plc_approximate(flux, float(s['t_frozen']), eps, data.hull))
                    for s in header['segments']]
        initial = _snapshot_from_dict(header['initial'])
        starts = [(int(s['after']), _snapshot_from_dict(s)) for s in header.get('slab_starts', [])]
    except (KeyError, TypeError, ValueError) as e:
        raise ArtifactError(f"malformed solution header: {e}") from e

    snapshots = [initial]
    pending = sorted(starts, key=lambda item: item[0])
    for j, r in enumerate(events):
        while pending and pending[0][0] <= j:
            snapshots.append(pending.pop(0)[1])
        snapshots.append(Snapshot(r.time, r.fronts, r.trace))
    snapshots.extend(s for _, s in pending)

    v0 = int(round(float(header.get('glimm_initial', 0.0)) / eps))
    glimm = [(0.0, v0)] + [(r.time, r.v_post) for r in events]
    solution = Solution(domain=domain, eps=eps, horizon=horizon, data=data, segments=segments,
                        snapshots=snapshots, events=events, glimm=glimm,
                        sharp=[(r.time, r.sharp_post) for r in events],
                        metadata=dict(header.get('metadata', {})))
    return solution


# -- tables ---------------------------------------------------------------

def write_json(path: Path, payload: Dict[str, Any]) -> None:
    path.write_text(json.dumps(payload, indent=2, default=str), encoding='utf-8')


def write_table(path: Path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> None:
    with open(path, 'w', newline='', encoding='utf-8') as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_float(v) if isinstance(v, float) else v for v in row])


def digest(path: Path) -> str:
    return get_file_hash(Path(path).read_bytes())
