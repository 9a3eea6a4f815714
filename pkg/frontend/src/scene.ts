/**
 * Builds the overlay scene for a snapshot: a flat list of drawables the
 * canvas painter (render.ts) consumes. Pure data in, pure data out, so tests
 * can assert sprite counts and geometry without a DOM.
 */

import type {
  FoodRainState,
  FrostState,
  Snapshot,
  VirusHitterState,
} from "./protocol.js";

export const TOWER_PALETTE = [
  "#e6194b",
  "#3cb44b",
  "#ffe119",
  "#4363d8",
  "#f58231",
  "#911eb4",
  "#46f0f0",
  "#f032e6",
];

export type Drawable =
  | { kind: "frost_cell"; x: number; y: number; w: number; h: number; alpha: number }
  | { kind: "food"; food: "fruit" | "dessert"; x: number; y: number }
  | { kind: "animal_mouth"; x: number; y: number; open: boolean }
  | { kind: "watchtower"; x: number; w: number; color: string; bombs: number }
  | { kind: "torch"; x: number }
  | { kind: "hp_bar"; fraction: number }
  | { kind: "leaderboard"; rows: Array<{ rank: number; nickname: string; score: number }> }
  | { kind: "guidance"; game: string };

export interface SceneOptions {
  /** whose tile is being rendered */
  pid: string;
  /** mouth anchor from the latest local pose, in tile coordinates */
  mouthAnchor?: { x: number; y: number; open: boolean };
  nicknames?: Record<string, string>;
  /** show the intro animation slot while a game is fresh */
  showGuidance?: boolean;
}

export interface OverlayScene {
  game: string;
  tick: number;
  drawables: Drawable[];
}

export function buildScene(snapshot: Snapshot, options: SceneOptions): OverlayScene {
  const drawables: Drawable[] = [];
  if (options.showGuidance) {
    drawables.push({ kind: "guidance", game: snapshot.game });
  }
  switch (snapshot.game) {
    case "frost":
      buildFrost(snapshot.state as FrostState, options, drawables);
      break;
    case "food_rain":
      buildFoodRain(snapshot.state as FoodRainState, options, drawables);
      break;
    case "virus_hitter":
      buildVirusHitter(snapshot.state as VirusHitterState, options, drawables);
      break;
    default:
      break; // unknown games render nothing rather than failing
  }
  return { game: snapshot.game, tick: snapshot.tick, drawables };
}

function buildFrost(state: FrostState, options: SceneOptions, out: Drawable[]): void {
  const tile = state.participants?.[options.pid];
  if (!tile) {
    return;
  }
  const w = state.grid_w;
  const h = state.grid_h;
  for (let j = 0; j < h; j += 1) {
    for (let i = 0; i < w; i += 1) {
      const intensity = tile.cells[j * w + i] ?? 0;
      if (intensity <= 0) {
        continue; // zero frost draws nothing
      }
      out.push({
        kind: "frost_cell",
        x: i / w,
        y: j / h,
        w: 1 / w,
        h: 1 / h,
        alpha: Math.min(1, intensity) * 0.85,
      });
    }
  }
}

function buildFoodRain(
  state: FoodRainState,
  options: SceneOptions,
  out: Drawable[],
): void {
  const tile = state.participants?.[options.pid];
  if (tile) {
    for (const item of tile.items) {
      out.push({ kind: "food", food: item.type, x: item.x, y: item.y });
    }
    const scores = Object.entries(state.participants).map(([pid, p]) => ({
      pid,
      score: p.score,
    }));
    scores.sort((a, b) => b.score - a.score);
    const rows = scores.map((entry, index) => ({
      rank: index > 0 && scores[index - 1].score === entry.score
        ? index // share the previous row's visual rank
        : index + 1,
      nickname: options.nicknames?.[entry.pid] ?? entry.pid,
      score: entry.score,
    }));
    // fix shared ranks to standard competition ranking
    for (let i = 1; i < rows.length; i += 1) {
      if (rows[i].score === rows[i - 1].score) {
        rows[i].rank = rows[i - 1].rank;
      }
    }
    out.push({ kind: "leaderboard", rows });
  }
  if (options.mouthAnchor) {
    out.push({
      kind: "animal_mouth",
      x: options.mouthAnchor.x,
      y: options.mouthAnchor.y,
      open: options.mouthAnchor.open,
    });
  }
}

function buildVirusHitter(
  state: VirusHitterState,
  options: SceneOptions,
  out: Drawable[],
): void {
  const towers = state.towers ?? [];
  const k = Math.max(towers.length, 1);
  towers.forEach((tower, index) => {
    out.push({
      kind: "watchtower",
      x: index / k,
      w: 1 / k,
      color: TOWER_PALETTE[tower.color % TOWER_PALETTE.length],
      bombs: tower.bombs,
    });
  });
  out.push({ kind: "torch", x: state.torch_x });
  out.push({
    kind: "hp_bar",
    fraction: state.initial_hp > 0 ? state.hp / state.initial_hp : 0,
  });
}

export function countFood(scene: OverlayScene): number {
  return scene.drawables.filter((d) => d.kind === "food").length;
}

export function frostCellCount(scene: OverlayScene): number {
  return scene.drawables.filter((d) => d.kind === "frost_cell").length;
}

export function hpFraction(scene: OverlayScene): number | null {
  const bar = scene.drawables.find((d) => d.kind === "hp_bar");
  return bar && bar.kind === "hp_bar" ? bar.fraction : null;
}
