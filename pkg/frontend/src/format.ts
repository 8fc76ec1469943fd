import type { ConsoleState, Failure, UiStage } from "./stages.js";
import { STAGES, stageIndex } from "./stages.js";

// stage durations arrive in seconds
export function formatSeconds(value: number): string {
  if (!Number.isFinite(value) || value < 0) return "";
  if (value < 0.0005) return "<1 ms";
  if (value < 1) return `${Math.round(value * 1000)} ms`;
  return `${value.toFixed(2)} s`;
}

export function failureBanner(failure: Failure | null): string {
  if (!failure) return "";
  return `${failure.category}: ${failure.evidence}`;
}

export type StageLook = "pending" | "active" | "done" | "failed";

// console stage -> the pipeline stage whose duration it displays
const DURATION_SOURCE: Partial<Record<UiStage, string>> = {
  generating: "llm_generation",
  extracting: "function_preparation",
  deploying: "faas_deployment",
};

export interface StageRow {
  stage: UiStage;
  look: StageLook;
  duration: string;
}

export function stageRows(state: ConsoleState): StageRow[] {
  const current = stageIndex(state.stage);
  return STAGES.map((stage) => {
    const index = stageIndex(stage);
    let look: StageLook = "pending";
    if (state.failedStage === stage) look = "failed";
    else if (index < current || (state.done && state.ok === true)) look = "done";
    else if (index === current) look = "active";

    const source = DURATION_SOURCE[stage];
    const seconds = source === undefined ? undefined : state.durations[source];
    return {
      stage,
      look,
      duration: seconds === undefined ? "" : formatSeconds(seconds),
    };
  });
}
