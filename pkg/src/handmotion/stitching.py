"""Merge hand estimates into body poses and refine arm rotations.

The merge replaces the 30 finger rotation blocks with the hand estimate's
values and rewrites each wrist's local rotation so its global orientation
matches the estimate.  The refinement then optimizes the six arm rotations
(shoulders, elbows, wrists) to track the merged pose's elbow/wrist/hand
joint positions, with temporal smoothing and a rotation-magnitude
regularizer, using monotone gradient descent with step-halving.

Hand estimate file format (little-endian)::

    magic      4 bytes  b"HEF1"
    version    u32      1
    frame_count u32     > 0
    fps        f32
    handedness u8       0 = right, 1 = left
    feature_count u32   198 = 2 * (15*6 + 9)
    per frame: left 15x6D f32, left wrist 3x3 f32 row-major,
               right 15x6D f32, right wrist 3x3 f32 row-major,
               left valid u8, right valid u8
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import torch

from .errors import (
    BadMagic,
    FrameCountMismatch,
    LayoutMismatch,
    NonFiniteObjective,
    TruncatedPayload,
    VersionUnsupported,
)
from .features import (
    ARM_BLOCKS,
    LEFT_HAND_BLOCKS,
    LEFT_WRIST_BLOCK,
    RIGHT_HAND_BLOCKS,
    RIGHT_WRIST_BLOCK,
    block_slice,
)
from .motion import HANDEDNESS, MotionSequence
from .rotation import matrix_to_rot6d, rot6d_to_matrix
from .skeleton import Skeleton, forward_kinematics, global_orientations

HAND_MAGIC = b"HEF1"
HAND_VERSION = 1
_HAND_HEADER = struct.Struct("<4sIIfBI")
HAND_FEATURES = 2 * (15 * 6 + 9)

# Joints tracked by the optimizer, in target order.
TARGET_JOINT_NAMES = (
    ["left_elbow", "right_elbow", "left_wrist", "right_wrist"]
    + [None] * 30  # filled per skeleton: 15 left-hand then 15 right-hand joints
)
NUM_TARGETS = 34


@dataclass
class HandEstimate:
    """Per-frame hand reconstruction: finger rotations plus global wrist pose."""

    left_rotations: np.ndarray   # (T, 15, 6)
    right_rotations: np.ndarray  # (T, 15, 6)
    left_wrist: np.ndarray       # (T, 3, 3) global orientation
    right_wrist: np.ndarray      # (T, 3, 3)
    left_valid: np.ndarray       # (T,) bool
    right_valid: np.ndarray      # (T,) bool
    fps: float = 25.0
    signer_handedness: str = "right"

    def __post_init__(self):
        t = self.left_rotations.shape[0]
        shapes = {
            "left_rotations": (t, 15, 6), "right_rotations": (t, 15, 6),
            "left_wrist": (t, 3, 3), "right_wrist": (t, 3, 3),
            "left_valid": (t,), "right_valid": (t,),
        }
        for name, want in shapes.items():
            got = getattr(self, name).shape
            if got != want:
                raise LayoutMismatch(f"{name}: expected shape {want}, got {got}")

    @property
    def num_frames(self) -> int:
        return self.left_rotations.shape[0]


def write_hand_estimate(path, est: HandEstimate) -> None:
    path = Path(path)
    t = est.num_frames
    header = _HAND_HEADER.pack(
        HAND_MAGIC, HAND_VERSION, t, est.fps,
        HANDEDNESS.index(est.signer_handedness), HAND_FEATURES,
    )
    chunks = [header]
    for i in range(t):
        frame = np.concatenate([
            est.left_rotations[i].reshape(-1),
            est.left_wrist[i].reshape(-1),
            est.right_rotations[i].reshape(-1),
            est.right_wrist[i].reshape(-1),
        ]).astype("<f4")
        chunks.append(frame.tobytes())
        chunks.append(struct.pack("<BB", int(est.left_valid[i]), int(est.right_valid[i])))
    path.write_bytes(b"".join(chunks))


def read_hand_estimate(path) -> HandEstimate:
    path = Path(path)
    raw = path.read_bytes()
    if len(raw) < _HAND_HEADER.size:
        raise TruncatedPayload(f"{path}: file shorter than header")
    magic, version, t, fps, handedness, feat = _HAND_HEADER.unpack_from(raw)
    if magic != HAND_MAGIC:
        raise BadMagic(f"{path}: expected {HAND_MAGIC!r}, found {magic!r}")
    if version != HAND_VERSION:
        raise VersionUnsupported(f"{path}: version {version}")
    if t == 0:
        raise TruncatedPayload(f"{path}: frame count is zero")
    if feat != HAND_FEATURES:
        raise TruncatedPayload(f"{path}: feature count {feat}, expected {HAND_FEATURES}")
    frame_bytes = HAND_FEATURES * 4 + 2
    body = raw[_HAND_HEADER.size:]
    if len(body) < t * frame_bytes:
        raise TruncatedPayload(f"{path}: payload {len(body)} bytes, expected {t * frame_bytes}")
    lr = np.empty((t, 15, 6)); rr = np.empty((t, 15, 6))
    lw = np.empty((t, 3, 3)); rw = np.empty((t, 3, 3))
    lv = np.empty(t, dtype=bool); rv = np.empty(t, dtype=bool)
    for i in range(t):
        off = i * frame_bytes
        vals = np.frombuffer(body[off:off + HAND_FEATURES * 4], dtype="<f4").astype(float)
        lr[i] = vals[:90].reshape(15, 6)
        lw[i] = vals[90:99].reshape(3, 3)
        rr[i] = vals[99:189].reshape(15, 6)
        rw[i] = vals[189:198].reshape(3, 3)
        lv[i], rv[i] = struct.unpack_from("<BB", body, off + HAND_FEATURES * 4)
    return HandEstimate(lr, rr, lw, rw, lv, rv, fps=float(fps),
                        signer_handedness=HANDEDNESS[handedness])


@dataclass
class StitchConfig:
    data_weight: float = 1.0
    smooth_weight: float = 0.1
    reg_weight: float = 0.01
    max_iterations: int = 200
    step_size: float = 0.05
    tolerance: float = 1e-6  # relative objective decrease

    def validate(self) -> None:
        for name in ("data_weight", "smooth_weight", "reg_weight"):
            v = getattr(self, name)
            if not np.isfinite(v) or v < 0:
                raise LayoutMismatch(f"{name} must be finite and non-negative")
        if self.max_iterations < 1:
            raise LayoutMismatch("max_iterations must be >= 1")


@dataclass
class StitchReport:
    objectives: list = field(default_factory=list)  # accepted-step trace
    frame_residuals: np.ndarray | None = None       # (T,) mean joint error, meters
    iterations: int = 0
    converged: bool = False


def merge_hands(body: MotionSequence, hands: HandEstimate,
                skeleton: Skeleton | None = None) -> MotionSequence:
    """Graft hand-estimate rotations onto a body pose sequence.

    Finger blocks are copied verbatim; each wrist's local rotation is set to
    parent_global.T @ hand_global so the merged wrist matches the estimate's
    global orientation.  Frames flagged invalid keep the body values.
    """
    body.require_full()
    if body.num_frames != hands.num_frames:
        raise FrameCountMismatch(
            f"body has {body.num_frames} frames, hands have {hands.num_frames}")
    if skeleton is None:
        from .skeleton import default_skeleton
        skeleton = default_skeleton()
    out = body.features.copy()
    elbow_idx = {"left": skeleton.index("left_elbow"), "right": skeleton.index("right_elbow")}
    wrist_block = {"left": LEFT_WRIST_BLOCK, "right": RIGHT_WRIST_BLOCK}
    hand_blocks = {"left": LEFT_HAND_BLOCKS, "right": RIGHT_HAND_BLOCKS}

    for t in range(body.num_frames):
        glob = global_orientations(skeleton, body.features[t])
        for side in ("left", "right"):
            valid = hands.left_valid[t] if side == "left" else hands.right_valid[t]
            if not valid:
                continue
            rots = hands.left_rotations[t] if side == "left" else hands.right_rotations[t]
            wrist_global = hands.left_wrist[t] if side == "left" else hands.right_wrist[t]
            for k, b in enumerate(hand_blocks[side]):
                out[t, block_slice(b)] = rots[k]
            parent_global = glob[elbow_idx[side]]
            local = parent_global.T @ wrist_global
            out[t, block_slice(wrist_block[side])] = matrix_to_rot6d(local)
    return MotionSequence(out, fps=body.fps, signer_handedness=body.signer_handedness,
                          id=body.id)


def target_joint_indices(skeleton: Skeleton) -> list[int]:
    """Indices of the 34 tracked joints: elbows, wrists, left hand, right hand."""
    idx = [skeleton.index("left_elbow"), skeleton.index("right_elbow"),
           skeleton.index("left_wrist"), skeleton.index("right_wrist")]
    idx += LEFT_HAND_BLOCKS + RIGHT_HAND_BLOCKS
    return idx


def build_targets(merged: MotionSequence, skeleton: Skeleton) -> np.ndarray:
    """Per-frame positions (T, 34, 3) of the tracked joints of the merged pose."""
    merged.require_full()
    idx = target_joint_indices(skeleton)
    out = np.empty((merged.num_frames, NUM_TARGETS, 3))
    for t in range(merged.num_frames):
        pos = forward_kinematics(skeleton, merged.features[t])
        out[t] = pos[idx]
    return out


def _rot6d_to_matrix_torch(r: torch.Tensor) -> torch.Tensor:
    """Batched differentiable 6D -> matrix (columns convention), shape (..., 6)."""
    a, b = r[..., :3], r[..., 3:]
    c0 = a / a.norm(dim=-1, keepdim=True)
    b_orth = b - (c0 * b).sum(-1, keepdim=True) * c0
    c1 = b_orth / b_orth.norm(dim=-1, keepdim=True)
    c2 = torch.cross(c0, c1, dim=-1)
    return torch.stack([c0, c1, c2], dim=-1)


def _geodesic_angle_sq(m: torch.Tensor) -> torch.Tensor:
    """Squared rotation angle of (..., 3, 3) matrices, smooth at the identity."""
    cos = (m.diagonal(dim1=-2, dim2=-1).sum(-1) - 1.0) / 2.0
    v = torch.stack([
        m[..., 2, 1] - m[..., 1, 2],
        m[..., 0, 2] - m[..., 2, 0],
        m[..., 1, 0] - m[..., 0, 1],
    ], dim=-1) / 2.0
    sin = torch.sqrt((v * v).sum(-1) + 1e-18)
    return torch.atan2(sin, cos) ** 2


class _ArmProblem:
    """Differentiable positions of the 34 tracked joints as a function of the
    six arm rotations, everything else frozen from the init sequence."""

    def __init__(self, init: MotionSequence, skeleton: Skeleton):
        init.require_full()
        self.skeleton = skeleton
        t = init.num_frames
        self.num_frames = t

        # Frozen global pose at each collar (arm-chain entry points).
        collar = {s: skeleton.index(f"{s}_collar") for s in ("left", "right")}
        self.collar_rot = {s: torch.empty(t, 3, 3, dtype=torch.float64) for s in ("left", "right")}
        self.collar_pos = {s: torch.empty(t, 3, dtype=torch.float64) for s in ("left", "right")}
        for i in range(t):
            pos = forward_kinematics(skeleton, init.features[i])
            glob = global_orientations(skeleton, init.features[i])
            for s in ("left", "right"):
                self.collar_rot[s][i] = torch.from_numpy(glob[collar[s]])
                self.collar_pos[s][i] = torch.from_numpy(pos[collar[s]])

        # Frozen finger rotations.
        self.hand_rot = {}
        for s, blocks in (("left", LEFT_HAND_BLOCKS), ("right", RIGHT_HAND_BLOCKS)):
            rots = np.empty((t, 15, 3, 3))
            for i in range(t):
                for k, b in enumerate(blocks):
                    rots[i, k] = rot6d_to_matrix(init.features[i, block_slice(b)])
            self.hand_rot[s] = torch.from_numpy(rots)

        # Arm-chain and hand offsets.
        def off(name):
            return torch.from_numpy(skeleton.offsets[skeleton.index(name)].copy())

        self.arm_offsets = {
            s: [off(f"{s}_shoulder"), off(f"{s}_elbow"), off(f"{s}_wrist")]
            for s in ("left", "right")
        }
        self.hand_parents = {}
        self.hand_offsets = {}
        for s, blocks in (("left", LEFT_HAND_BLOCKS), ("right", RIGHT_HAND_BLOCKS)):
            wrist = skeleton.index(f"{s}_wrist")
            parents, offs = [], []
            for b in blocks:
                p = skeleton.parents[b]
                parents.append(-1 if p == wrist else blocks.index(p))
                offs.append(skeleton.offsets[b])
            self.hand_parents[s] = parents
            self.hand_offsets[s] = torch.from_numpy(np.array(offs))

    def positions(self, params: torch.Tensor) -> torch.Tensor:
        """(T, 34, 3) tracked-joint positions; params is (T, 6, 6) 6D blocks in
        the order L-shoulder, L-elbow, L-wrist, R-shoulder, R-elbow, R-wrist."""
        rot = _rot6d_to_matrix_torch(params)  # (T, 6, 3, 3)
        per_side = {"left": rot[:, 0:3], "right": rot[:, 3:6]}
        elbows, wrists, hands = {}, {}, {}
        for s in ("left", "right"):
            g_collar = self.collar_rot[s]
            off_sh, off_el, off_wr = self.arm_offsets[s]
            p_shoulder = self.collar_pos[s] + torch.einsum("tij,j->ti", g_collar, off_sh)
            g_shoulder = g_collar @ per_side[s][:, 0]
            p_elbow = p_shoulder + torch.einsum("tij,j->ti", g_shoulder, off_el)
            g_elbow = g_shoulder @ per_side[s][:, 1]
            p_wrist = p_elbow + torch.einsum("tij,j->ti", g_elbow, off_wr)
            g_wrist = g_elbow @ per_side[s][:, 2]
            elbows[s], wrists[s] = p_elbow, p_wrist

            joint_pos, joint_rot = [], []
            for k, parent in enumerate(self.hand_parents[s]):
                if parent == -1:
                    g_par, p_par = g_wrist, p_wrist
                else:
                    g_par, p_par = joint_rot[parent], joint_pos[parent]
                p = p_par + torch.einsum("tij,j->ti", g_par, self.hand_offsets[s][k])
                joint_pos.append(p)
                joint_rot.append(g_par @ self.hand_rot[s][:, k])
            hands[s] = torch.stack(joint_pos, dim=1)  # (T, 15, 3)

        return torch.cat([
            elbows["left"].unsqueeze(1), elbows["right"].unsqueeze(1),
            wrists["left"].unsqueeze(1), wrists["right"].unsqueeze(1),
            hands["left"], hands["right"],
        ], dim=1)

    def objective(self, params, targets, cfg: StitchConfig) -> torch.Tensor:
        pos = self.positions(params)
        j = cfg.data_weight * ((pos - targets) ** 2).sum()
        if self.num_frames > 1 and cfg.smooth_weight > 0:
            j = j + cfg.smooth_weight * ((pos[1:] - pos[:-1]) ** 2).sum()
        if cfg.reg_weight > 0:
            rot = _rot6d_to_matrix_torch(params)
            j = j + cfg.reg_weight * _geodesic_angle_sq(rot).sum()
        return j


def neutral_arm_params(num_frames: int) -> np.ndarray:
    """T-pose initialization: identity 6D blocks for all six arm rotations."""
    params = np.zeros((num_frames, 6, 6))
    params[:, :, 0] = 1.0
    params[:, :, 4] = 1.0
    return params


def optimize_arms(
    targets: np.ndarray,
    init: MotionSequence,
    cfg: StitchConfig,
    skeleton: Skeleton,
) -> tuple[MotionSequence, StitchReport]:
    """Refine the six arm rotations so tracked joints match ``targets``.

    Starts from the neutral (T-pose) arm configuration and descends the
    objective with step-halving line search; the accepted-objective trace is
    non-increasing by construction.  All non-arm feature blocks are copied
    from ``init`` unchanged.
    """
    cfg.validate()
    init.require_full()
    targets = np.asarray(targets, dtype=float)
    if targets.shape != (init.num_frames, NUM_TARGETS, 3):
        raise LayoutMismatch(
            f"targets shape {targets.shape}, expected {(init.num_frames, NUM_TARGETS, 3)}")

    problem = _ArmProblem(init, skeleton)
    targets_t = torch.from_numpy(targets)
    params = torch.from_numpy(neutral_arm_params(init.num_frames))
    params.requires_grad_(True)

    def value_and_grad(p):
        with torch.enable_grad():
            p = p.detach().requires_grad_(True)
            j = problem.objective(p, targets_t, cfg)
            if not torch.isfinite(j):
                raise NonFiniteObjective(f"objective became {j.item()}")
            (grad,) = torch.autograd.grad(j, p)
        return float(j.detach()), grad

    def value(p):
        with torch.no_grad():
            j = problem.objective(p, targets_t, cfg)
        if not torch.isfinite(j):
            raise NonFiniteObjective(f"objective became {j.item()}")
        return float(j)

    report = StitchReport()
    j_cur, grad = value_and_grad(params)
    report.objectives.append(j_cur)
    step = cfg.step_size
    prev_params = prev_grad = None
    with torch.no_grad():
        for it in range(cfg.max_iterations):
            report.iterations = it + 1
            if prev_grad is not None:
                # Barzilai-Borwein step seed; the halving loop below keeps
                # the accepted-objective trace non-increasing regardless.
                dp = params - prev_params
                dg = grad - prev_grad
                denom = float((dg * dg).sum())
                if denom > 0:
                    bb = abs(float((dp * dg).sum())) / denom
                    if np.isfinite(bb) and bb > 0:
                        step = bb
            accepted = False
            for _ in range(60):
                cand = params - step * grad
                j_new = value(cand)
                if j_new <= j_cur:
                    accepted = True
                    break
                step *= 0.5
            if not accepted:
                report.converged = True
                break
            rel = (j_cur - j_new) / max(abs(j_cur), 1e-300)
            prev_params, prev_grad = params, grad
            params = cand
            j_cur = j_new
            report.objectives.append(j_cur)
            if rel < cfg.tolerance:
                report.converged = True
                break
            _, grad = value_and_grad(params)

    out = init.features.copy()
    final = params.detach().numpy()
    for t in range(init.num_frames):
        for k, b in enumerate(ARM_BLOCKS):
            out[t, block_slice(b)] = matrix_to_rot6d(rot6d_to_matrix(final[t, k]))
    refined = MotionSequence(out, fps=init.fps, signer_handedness=init.signer_handedness,
                             id=init.id)

    with torch.no_grad():
        pos = problem.positions(params.detach()).numpy()
    report.frame_residuals = np.linalg.norm(pos - targets, axis=2).mean(axis=1)
    return refined, report
