// Pure state model for the build stage indicator. The backend streams
// pipeline events; this reducer folds them into what the console shows.
// The indicator is monotonic by construction: reduce() only ever moves the
// highlighted stage forward, even when a retry re-runs earlier pipeline
// stages.

export const STAGES = ["prompting", "generating", "extracting", "deploying", "live"] as const;

export type UiStage = (typeof STAGES)[number];

// pipeline stage name -> console stage shown while it runs
const RUNNING_AS: Record<string, UiStage> = {
  llm_generation: "generating",
  function_preparation: "extracting",
  faas_deployment: "deploying",
};

export interface Failure {
  category: string;
  evidence: string;
}

export interface BuildEvent {
  event: string;
  stage?: string;
  state?: string;
  attempt?: number;
  duration?: number;
  detail?: string;
  ok?: boolean;
  failure?: Failure | null;
  [key: string]: unknown;
}

export interface ConsoleState {
  stage: UiStage;
  // pipeline stage -> seconds; populated only when a stage completed
  durations: Record<string, number>;
  failure: Failure | null;
  failedStage: UiStage | null;
  done: boolean;
  ok: boolean | null;
  result: BuildEvent | null;
}

export function initialState(): ConsoleState {
  return {
    stage: "prompting",
    durations: {},
    failure: null,
    failedStage: null,
    done: false,
    ok: null,
    result: null,
  };
}

export function stageIndex(stage: UiStage): number {
  return STAGES.indexOf(stage);
}

function forward(current: UiStage, target: UiStage): UiStage {
  return stageIndex(target) > stageIndex(current) ? target : current;
}

export function reduce(state: ConsoleState, event: BuildEvent): ConsoleState {
  const next: ConsoleState = { ...state, durations: { ...state.durations } };

  if (event.event === "stage" && typeof event.stage === "string") {
    const shown = RUNNING_AS[event.stage];
    if (!shown) return next;
    next.stage = forward(next.stage, shown);
    if (event.state !== "running" && typeof event.duration === "number") {
      next.durations[event.stage] = event.duration;
    }
    if (event.state === "failed") {
      next.failedStage = shown;
    }
    return next;
  }

  if (event.event === "result") {
    next.done = true;
    next.ok = event.ok === true;
    next.result = event;
    if (event.ok === true) {
      next.stage = "live";
      next.failedStage = null;
      next.failure = null;
    } else if (event.failure && typeof event.failure === "object") {
      next.failure = {
        category: String(event.failure.category),
        evidence: String(event.failure.evidence),
      };
    }
    return next;
  }

  return next;
}

export function reduceAll(events: BuildEvent[]): ConsoleState {
  return events.reduce(reduce, initialState());
}
