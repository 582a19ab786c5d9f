// Application wiring for the two-screen loop: view exercise and record, then
// read the feedback cards and retry. One submission in flight at a time.

import { ApiError, GatewayClient } from "./api.js";
import { Exercise } from "./models.js";
import { MicRecorder, Recorder, RecorderFactory, Recording } from "./recorder.js";
import {
  HistoryEntry,
  renderErrorBanner,
  renderExerciseView,
  renderFeedbackView,
  renderHistory,
  renderValidationGuidance,
} from "./views.js";
import { toWav16k } from "./wav.js";

export interface AppElements {
  exerciseList: HTMLElement;
  exercisePane: HTMLElement;
  resultPane: HTMLElement;
  historyPane: HTMLElement;
  recordButton: HTMLButtonElement;
  status: HTMLElement;
}

export class App {
  private client: GatewayClient;
  private recorderFactory: RecorderFactory;
  private recorder: Recorder | null = null;
  private exercise: Exercise | null = null;
  private submitting = false;
  private lastRecording: Recording | null = null;
  private history: HistoryEntry[] = [];

  constructor(
    private readonly elements: AppElements,
    gatewayUrl: string,
    recorderFactory?: RecorderFactory,
  ) {
    this.client = new GatewayClient(gatewayUrl);
    this.recorderFactory = recorderFactory ?? (() => new MicRecorder());
    this.elements.recordButton.addEventListener("click", () => void this.toggleRecording());
  }

  private setStatus(text: string): void {
    this.elements.status.textContent = text;
  }

  async start(): Promise<void> {
    try {
      const summaries = await this.client.listExercises();
      const list = this.elements.exerciseList;
      list.replaceChildren();
      for (const summary of summaries) {
        const button = document.createElement("button");
        button.className = "exercise-item";
        button.textContent = summary.text;
        button.dataset.exerciseId = summary.id;
        button.addEventListener("click", () => void this.chooseExercise(summary.id));
        list.appendChild(button);
      }
      this.setStatus(`${summaries.length} exercises available`);
    } catch (error) {
      renderErrorBanner(
        this.elements.exercisePane,
        `Could not reach the gateway: ${(error as Error).message}`,
        () => void this.start(),
      );
    }
  }

  async chooseExercise(id: string): Promise<void> {
    try {
      this.exercise = await this.client.getExercise(id);
      renderExerciseView(this.elements.exercisePane, this.exercise);
      this.elements.resultPane.replaceChildren();
      this.setStatus(`Ready to record “${this.exercise.text}”`);
    } catch (error) {
      renderErrorBanner(this.elements.exercisePane, (error as Error).message);
    }
  }

  get currentExercise(): Exercise | null {
    return this.exercise;
  }

  async toggleRecording(): Promise<void> {
    if (this.recorder) {
      await this.finishAndSubmit();
    } else {
      await this.beginRecording();
    }
  }

  async beginRecording(): Promise<void> {
    if (!this.exercise || this.submitting) return;
    try {
      this.recorder = this.recorderFactory();
      await this.recorder.start();
      this.elements.recordButton.textContent = "Stop";
      this.setStatus("Recording…");
    } catch (error) {
      this.recorder = null;
      renderErrorBanner(
        this.elements.resultPane,
        `Microphone unavailable: ${(error as Error).message}`,
      );
    }
  }

  async finishAndSubmit(): Promise<void> {
    if (!this.recorder || !this.exercise) return;
    const recorder = this.recorder;
    this.recorder = null;
    this.elements.recordButton.textContent = "Record";
    const recording = await recorder.stop();
    this.lastRecording = recording;
    await this.submitRecording(recording);
  }

  /** Submit a recording; kept separate so a failed upload can be retried. */
  async submitRecording(recording: Recording): Promise<void> {
    if (!this.exercise || this.submitting) return;
    this.submitting = true;
    this.elements.recordButton.disabled = true;
    this.setStatus("Analyzing…");
    try {
      const wav = toWav16k(recording.samples, recording.sampleRate);
      const result = await this.client.submitAttempt(this.exercise.id, wav);
      if (result.kind === "analyzed") {
        renderFeedbackView(this.elements.resultPane, result.analysis);
        this.setStatus("Feedback ready");
      } else {
        renderValidationGuidance(this.elements.resultPane, result.validation, () =>
          void this.beginRecording(),
        );
        this.setStatus(`Attempt rejected: ${result.validation.failed_code ?? "unknown"}`);
      }
      await this.recordHistory(result.attemptId);
    } catch (error) {
      if (error instanceof ApiError) {
        renderErrorBanner(this.elements.resultPane, `${error.code}: ${error.message}`);
      } else {
        // network failure: recording is preserved for retry
        renderErrorBanner(this.elements.resultPane, "Upload failed. Check the connection.", () =>
          void this.submitRecording(this.lastRecording ?? recording),
        );
      }
      this.setStatus("Submission failed");
    } finally {
      this.submitting = false;
      this.elements.recordButton.disabled = false;
    }
  }

  private async recordHistory(attemptId: string): Promise<void> {
    try {
      const record = await this.client.getAttempt(attemptId);
      this.history.unshift({
        attemptId: record.attempt_id,
        exerciseId: record.exercise_id,
        status: record.status,
        receivedAt: record.received_at,
      });
      renderHistory(this.elements.historyPane, this.history);
    } catch {
      // history is cosmetic; ignore lookup failures
    }
  }
}

export function mountApp(gatewayUrl: string, recorderFactory?: RecorderFactory): App {
  const byId = (id: string) => {
    const node = document.getElementById(id);
    if (!node) throw new Error(`missing element #${id}`);
    return node;
  };
  const app = new App(
    {
      exerciseList: byId("exercise-list"),
      exercisePane: byId("exercise-pane"),
      resultPane: byId("result-pane"),
      historyPane: byId("history-pane"),
      recordButton: byId("record-button") as HTMLButtonElement,
      status: byId("status-bar"),
    },
    gatewayUrl,
    recorderFactory,
  );
  void app.start();
  return app;
}

declare global {
  interface Window {
    GATEWAY_URL?: string;
    app?: App;
  }
}

if (typeof window !== "undefined" && typeof document !== "undefined" && document.getElementById("exercise-list")) {
  window.app = mountApp(window.GATEWAY_URL ?? "http://localhost:8000");
}
