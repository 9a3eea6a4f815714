/**
 * Browser entry point: join form, webcam/simulated pose pipeline, overlay
 * canvas (capture it with any virtual-camera tool to pipe the game into a
 * meeting), break prompts, leaderboards, and the post-game rating panel.
 */

import { GameClient } from "./connection.js";
import type { PosePayload } from "./protocol.js";
import { PoseThrottle, SimulatedPoseSource, type PoseSource } from "./poseSource.js";
import { buildScene, type SceneOptions } from "./scene.js";
import { renderScene } from "./render.js";
import { DIMENSIONS, EvaluationPanel, downloadCsv } from "./ratings.js";
import { CameraPoseSource, type LandmarkDetector } from "./tracker.js";

const $ = <T extends HTMLElement>(id: string): T => {
  const element = document.getElementById(id);
  if (!element) {
    throw new Error(`missing #${id}`);
  }
  return element as T;
};

interface PageState {
  client: GameClient | null;
  source: PoseSource | null;
  lastPose: PosePayload | null;
  spectator: boolean;
  playedGames: Set<string>;
  gameStartedAt: number;
}

const page: PageState = {
  client: null,
  source: null,
  lastPose: null,
  spectator: false,
  playedGames: new Set(),
  gameStartedAt: 0,
};

function setBanner(text: string, tone: "info" | "warn" | "error" = "info"): void {
  const banner = $("banner");
  banner.textContent = text;
  banner.dataset.tone = tone;
}

function mouthAnchor(): SceneOptions["mouthAnchor"] {
  const pose = page.lastPose;
  if (!pose) {
    return undefined;
  }
  const left = pose.keypoints.mouth_left;
  const right = pose.keypoints.mouth_right;
  const top = pose.keypoints.mouth_top;
  const bottom = pose.keypoints.mouth_bottom;
  if (left[2] < 0.3 || right[2] < 0.3) {
    return undefined;
  }
  const width = Math.abs(right[0] - left[0]);
  const mar = Math.abs(top[1] - bottom[1]) / Math.max(width, 1e-6);
  return {
    x: (left[0] + right[0]) / 2,
    y: (left[1] + right[1]) / 2,
    open: mar > 0.35,
  };
}

function redraw(): void {
  const client = page.client;
  const canvas = $("stage") as unknown as HTMLCanvasElement;
  const video = $("camera") as unknown as HTMLVideoElement;
  const snapshot = client?.state.snapshot ?? null;
  const scene = snapshot && client?.state.pid
    ? buildScene(snapshot, {
        pid: client.state.pid,
        mouthAnchor: mouthAnchor(),
        nicknames: Object.fromEntries(
          client.state.roster.map((entry) => [entry.pid, entry.nickname]),
        ),
        showGuidance: Date.now() - page.gameStartedAt < 6000,
      })
    : null;
  renderScene(
    { canvas, video: page.spectator ? undefined : video, mirror: true },
    scene,
  );
  requestAnimationFrame(redraw);
}

function refreshPanel(): void {
  const client = page.client;
  if (!client) {
    return;
  }
  const state = client.state;
  $("roster").innerHTML = state.roster
    .map((entry) => `<li>${entry.nickname}</li>`)
    .join("");
  if (state.lastError) {
    setBanner(`server: ${state.lastError.code} ${state.lastError.msg}`, "error");
    state.lastError = null;
  }
  if (state.suggestions.length > 0) {
    setBanner(
      "Break time! Suggested: " +
        state.suggestions.map((s) => `${s.game} (${s.score.toFixed(2)})`).join(", "),
      "info",
    );
  }
  if (state.activeGame) {
    page.playedGames.add(state.activeGame.game);
    if (state.activeGame.warning) {
      setBanner(
        `${state.activeGame.game} usually suits the other moment of the meeting — playing anyway`,
        "warn",
      );
    }
  }
  if (state.lastResults) {
    $("results").textContent = JSON.stringify(state.lastResults, null, 2);
  }
}

async function join(): Promise<void> {
  const nickname = ($("nickname") as unknown as HTMLInputElement).value.trim();
  const url = ($("server") as unknown as HTMLInputElement).value.trim();
  if (!nickname) {
    setBanner("enter a nickname first", "warn");
    return;
  }
  const client = new GameClient({
    url,
    nickname,
    onUpdate: refreshPanel,
  });
  page.client = client;
  try {
    await client.connect();
    setBanner(`joined as ${client.state.pid}`);
  } catch (error) {
    setBanner(`connection failed: ${String(error)} — retry when ready`, "error");
    return;
  }
  await startPoseSource();
}

async function startPoseSource(): Promise<void> {
  const video = $("camera") as unknown as HTMLVideoElement;
  const simulated = ($("simulated") as unknown as HTMLInputElement).checked;
  const throttle = new PoseThrottle();
  const emit = (pose: PosePayload): void => {
    if (!throttle.admit(pose.t_ms)) {
      return; // never exceed the server tick rate
    }
    page.lastPose = pose;
    page.client?.sendPose(pose);
  };
  if (simulated) {
    page.spectator = false;
    page.source = new SimulatedPoseSource();
    page.source.start(emit);
    setBanner("driving a simulated pose (no camera)");
    return;
  }
  const detector = (window as unknown as { meetmotionDetector?: LandmarkDetector })
    .meetmotionDetector;
  if (!detector) {
    page.spectator = true;
    setBanner("no landmark tracker plugged in — spectator mode", "warn");
    return;
  }
  const camera = new CameraPoseSource(video, detector, (reason) => {
    page.spectator = true;
    setBanner(`${reason} — spectator mode`, "warn");
  });
  if (await camera.open()) {
    page.source = camera;
    camera.start(emit);
    setBanner("camera pose pipeline running");
  }
}

function wireRatings(): void {
  $("export").addEventListener("click", () => {
    const client = page.client;
    if (!client?.state.pid) {
      setBanner("join a session first", "warn");
      return;
    }
    if (page.playedGames.size === 0) {
      setBanner("play a game before rating", "warn");
      return;
    }
    const panel = new EvaluationPanel(client.state.pid, [...page.playedGames]);
    const grid = $("sliders");
    for (const game of panel.games) {
      for (const dimension of DIMENSIONS) {
        const slider = grid.querySelector<HTMLInputElement>(
          `input[data-game="${game}"][data-dim="${dimension}"]`,
        );
        if (slider) {
          panel.setRating(game, dimension, Number(slider.value));
        }
      }
    }
    try {
      downloadCsv(panel.toCsv());
      setBanner("ratings exported");
    } catch (error) {
      setBanner(String(error), "warn");
    }
  });
}

function buildSliderGrid(): void {
  const grid = $("sliders");
  const games = ["frost", "food_rain", "virus_hitter"];
  grid.innerHTML = games
    .map(
      (game) =>
        `<fieldset><legend>${game}</legend>` +
        DIMENSIONS.map(
          (dimension) =>
            `<label>${dimension}
             <input type="range" min="0" max="1" step="0.01" value="0.5"
                    data-game="${game}" data-dim="${dimension}"></label>`,
        ).join("") +
        `</fieldset>`,
    )
    .join("");
}

function wireControls(): void {
  $("join").addEventListener("click", () => void join());
  for (const game of ["frost", "food_rain", "virus_hitter"]) {
    $(`play-${game}`).addEventListener("click", () => {
      const trigger = ($("trigger") as unknown as HTMLSelectElement)
        .value as "break" | "mid_meeting";
      page.gameStartedAt = Date.now();
      page.client?.startGame(game, trigger);
    });
  }
  $("layout").addEventListener("change", (event) => {
    const value = (event.target as HTMLSelectElement).value;
    if (page.client) {
      page.client.state.layoutPreview = value === "asymmetric" ? "asymmetric" : "symmetric";
    }
  });
}

window.addEventListener("DOMContentLoaded", () => {
  buildSliderGrid();
  wireControls();
  wireRatings();
  requestAnimationFrame(redraw);
});
