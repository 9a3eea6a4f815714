/**
 * Canvas painter: draws the mirrored self-video and the overlay scene on top.
 * The output canvas is what screen-capture or virtual-camera tooling picks up
 * for compositing into a meeting.
 */

import type { Drawable, OverlayScene } from "./scene.js";

export interface RenderTarget {
  canvas: HTMLCanvasElement;
  video?: HTMLVideoElement;
  /** mirror the self-video for comfort; overlay geometry is unaffected */
  mirror?: boolean;
}

export function renderScene(target: RenderTarget, scene: OverlayScene | null): void {
  const ctx = target.canvas.getContext("2d");
  if (!ctx) {
    return;
  }
  const { width, height } = target.canvas;
  ctx.clearRect(0, 0, width, height);
  if (target.video && target.video.readyState >= 2) {
    ctx.save();
    if (target.mirror ?? true) {
      ctx.translate(width, 0);
      ctx.scale(-1, 1);
    }
    ctx.drawImage(target.video, 0, 0, width, height);
    ctx.restore();
  } else {
    ctx.fillStyle = "#1b1f27";
    ctx.fillRect(0, 0, width, height);
  }
  if (!scene) {
    return;
  }
  for (const drawable of scene.drawables) {
    drawOne(ctx, drawable, width, height);
  }
}

function drawOne(
  ctx: CanvasRenderingContext2D,
  d: Drawable,
  width: number,
  height: number,
): void {
  switch (d.kind) {
    case "frost_cell": {
      ctx.fillStyle = `rgba(205, 228, 255, ${d.alpha.toFixed(3)})`;
      ctx.fillRect(d.x * width, d.y * height, d.w * width + 1, d.h * height + 1);
      break;
    }
    case "food": {
      ctx.font = `${Math.round(height * 0.07)}px sans-serif`;
      ctx.textAlign = "center";
      ctx.fillText(d.food === "fruit" ? "🍎" : "🍩", d.x * width, d.y * height);
      break;
    }
    case "animal_mouth": {
      const r = width * 0.06;
      ctx.fillStyle = "#f4a259";
      ctx.beginPath();
      ctx.ellipse(d.x * width, d.y * height, r, d.open ? r : r * 0.35, 0, 0, Math.PI * 2);
      ctx.fill();
      ctx.fillStyle = "#70363a";
      ctx.beginPath();
      ctx.ellipse(
        d.x * width,
        d.y * height,
        r * 0.55,
        d.open ? r * 0.6 : r * 0.1,
        0,
        0,
        Math.PI * 2,
      );
      ctx.fill();
      break;
    }
    case "watchtower": {
      const x = d.x * width;
      const w = d.w * width;
      ctx.fillStyle = d.color;
      ctx.fillRect(x + w * 0.25, height * 0.72, w * 0.5, height * 0.24);
      ctx.fillStyle = "#222";
      ctx.font = `${Math.round(height * 0.05)}px sans-serif`;
      ctx.textAlign = "center";
      ctx.fillText("💣".repeat(d.bombs), x + w * 0.5, height * 0.7);
      break;
    }
    case "torch": {
      ctx.fillStyle = "#ffd166";
      ctx.beginPath();
      ctx.arc(d.x * width, height * 0.62, width * 0.02, 0, Math.PI * 2);
      ctx.fill();
      break;
    }
    case "hp_bar": {
      const barWidth = width * 0.5;
      ctx.fillStyle = "rgba(0,0,0,0.5)";
      ctx.fillRect(width * 0.25, height * 0.05, barWidth, height * 0.035);
      ctx.fillStyle = "#6fe06f";
      ctx.fillRect(width * 0.25, height * 0.05, barWidth * d.fraction, height * 0.035);
      break;
    }
    case "leaderboard": {
      ctx.fillStyle = "rgba(0,0,0,0.55)";
      const rowHeight = height * 0.05;
      ctx.fillRect(0, 0, width * 0.32, rowHeight * (d.rows.length + 0.5));
      ctx.fillStyle = "#fff";
      ctx.font = `${Math.round(rowHeight * 0.7)}px sans-serif`;
      ctx.textAlign = "left";
      d.rows.forEach((row, index) => {
        ctx.fillText(
          `${row.rank}. ${row.nickname} ${row.score}`,
          width * 0.02,
          rowHeight * (index + 1),
        );
      });
      break;
    }
    case "guidance": {
      ctx.fillStyle = "rgba(255,255,255,0.85)";
      ctx.font = `${Math.round(height * 0.045)}px sans-serif`;
      ctx.textAlign = "center";
      ctx.fillText(guidanceLine(d.game), width / 2, height * 0.15);
      break;
    }
    default:
      break;
  }
}

function guidanceLine(game: string): string {
  switch (game) {
    case "frost":
      return "Raise and lower your head to sweep the frost away";
    case "food_rain":
      return "Sway under the fruit and open wide — skip the desserts!";
    case "virus_hitter":
      return "Hitter: aim with your nose. Everyone else: twist to load bombs";
    default:
      return "";
  }
}
