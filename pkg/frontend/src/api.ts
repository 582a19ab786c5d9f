// Thin fetch client for the gateway. Every response body is schema-validated;
// the UI never invents or recomputes analysis fields.

import {
  AnalysisResult,
  AttemptAcceptedSchema,
  AttemptRecord,
  AttemptRecordSchema,
  AttemptRejectedSchema,
  ErrorEnvelopeSchema,
  Exercise,
  ExerciseSchema,
  ExerciseSummary,
  ExerciseSummarySchema,
  ValidationReport,
} from "./models.js";
import { z } from "zod";

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

export type SubmitResult =
  | { kind: "analyzed"; attemptId: string; analysis: AnalysisResult }
  | { kind: "rejected"; attemptId: string; validation: ValidationReport };

async function parseErrorEnvelope(response: Response): Promise<ApiError> {
  let code = "http_error";
  let message = `${response.status} ${response.statusText}`;
  try {
    const body = ErrorEnvelopeSchema.parse(await response.json());
    code = body.error.code;
    message = body.error.message;
  } catch {
    // non-envelope error body: keep the transport-level message
  }
  return new ApiError(response.status, code, message);
}

export class GatewayClient {
  constructor(public readonly baseUrl: string) {}

  private url(path: string): string {
    return `${this.baseUrl.replace(/\/$/, "")}${path}`;
  }

  async listExercises(): Promise<ExerciseSummary[]> {
    const response = await fetch(this.url("/v1/exercises"));
    if (!response.ok) throw await parseErrorEnvelope(response);
    const body = z
      .object({ exercises: z.array(ExerciseSummarySchema) })
      .parse(await response.json());
    return body.exercises;
  }

  async getExercise(id: string): Promise<Exercise> {
    const response = await fetch(this.url(`/v1/exercises/${encodeURIComponent(id)}`));
    if (!response.ok) throw await parseErrorEnvelope(response);
    return ExerciseSchema.parse(await response.json());
  }

  async submitAttempt(exerciseId: string, wav: Uint8Array): Promise<SubmitResult> {
    const form = new FormData();
    form.append("exercise_id", exerciseId);
    const bytes = new Uint8Array(wav); // detached copy keeps Blob happy everywhere
    form.append("audio", new Blob([bytes.buffer], { type: "audio/wav" }), "attempt.wav");
    const response = await fetch(this.url("/v1/attempts"), { method: "POST", body: form });
    if (response.status === 200) {
      const body = AttemptAcceptedSchema.parse(await response.json());
      return { kind: "analyzed", attemptId: body.attempt_id, analysis: body.analysis };
    }
    if (response.status === 422) {
      const body = AttemptRejectedSchema.parse(await response.json());
      return { kind: "rejected", attemptId: body.attempt_id, validation: body.validation };
    }
    throw await parseErrorEnvelope(response);
  }

  async getAttempt(id: string): Promise<AttemptRecord> {
    const response = await fetch(this.url(`/v1/attempts/${encodeURIComponent(id)}`));
    if (!response.ok) throw await parseErrorEnvelope(response);
    return AttemptRecordSchema.parse(await response.json());
  }
}
