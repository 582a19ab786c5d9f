// Client-side mirrors of the gateway's JSON responses, schema-validated on
// receipt so a drifting backend fails loudly instead of rendering garbage.

import { z } from "zod";

export const ExerciseSummarySchema = z.object({
  id: z.string(),
  text: z.string(),
  word_count: z.number(),
});

export const ExerciseWordSchema = z.object({
  text: z.string(),
  phonemes: z.array(z.string()),
  syllables: z.array(z.tuple([z.number(), z.number()])),
  primary_stress: z.number(),
  content_word: z.boolean(),
});

export const ExerciseSchema = z.object({
  id: z.string(),
  text: z.string(),
  words: z.array(ExerciseWordSchema),
  sentence_stress_words: z.array(z.number()),
  breath_groups: z.array(z.tuple([z.number(), z.number()])),
  minimal_pairs: z.array(
    z.object({
      word_index: z.number(),
      phoneme_index: z.number(),
      target: z.string(),
      contrast: z.string(),
    }),
  ),
  reference_audio: z.array(z.string()),
});

export const ValidationReportSchema = z.object({
  duration: z.object({ phoneme_rate: z.number(), ok: z.boolean() }).nullable(),
  voicing: z
    .object({
      voiced_fraction: z.number(),
      voiced_frames: z.number(),
      ok: z.boolean(),
    })
    .nullable(),
  proximity: z.object({ phoneme_error_rate: z.number(), ok: z.boolean() }).nullable(),
  overall: z.boolean(),
  failed_code: z.string().nullable(),
});

export const PhonemeRowSchema = z.object({
  expected: z.string(),
  predicted: z.string(),
  start_ms: z.number(),
  end_ms: z.number(),
  expected_posterior: z.number(),
  predicted_posterior: z.number(),
  verdict: z.string(),
  substituted_by: z.string().nullable(),
  gop: z.number(),
});

export const WordAnalysisSchema = z.object({
  word_index: z.number(),
  text: z.string(),
  phonemes: z.array(PhonemeRowSchema),
});

// kind stays an open string: unknown kinds must render as raw detail,
// never be dropped.
export const FeedbackCardSchema = z.object({
  kind: z.string(),
  word_index: z.number().nullable(),
  status: z.enum(["good", "needs_work"]),
  detail: z.record(z.string(), z.unknown()),
  advice_key: z.string(),
});

export const AnalysisResultSchema = z.object({
  validation: ValidationReportSchema,
  words: z.array(WordAnalysisSchema),
  prosody: z.object({
    word_stress: z.array(
      z.object({
        word_index: z.number(),
        detected_syllable: z.number(),
        expected_syllable: z.number(),
        ok: z.boolean(),
      }),
    ),
    sentence_stress: z.array(
      z.object({
        word_index: z.number(),
        score: z.number(),
        expected: z.boolean(),
        detected: z.boolean(),
        ok: z.boolean(),
      }),
    ),
    pauses: z.object({
      pauses: z.array(
        z.object({ start_ms: z.number(), end_ms: z.number(), after_word_index: z.number() }),
      ),
      detected_groups: z.array(z.tuple([z.number(), z.number()])),
      boundary_matches: z.array(
        z.object({ after_word_index: z.number(), matched: z.boolean() }),
      ),
      spurious_pauses: z.array(z.number()),
    }),
  }),
  cards: z.array(FeedbackCardSchema),
});

export const AttemptAcceptedSchema = z.object({
  attempt_id: z.string(),
  analysis: AnalysisResultSchema,
});

export const AttemptRejectedSchema = z.object({
  error: z.object({ code: z.string(), message: z.string() }),
  attempt_id: z.string(),
  validation: ValidationReportSchema,
});

export const AttemptRecordSchema = z.object({
  attempt_id: z.string(),
  exercise_id: z.string(),
  received_at: z.string(),
  audio_digest: z.string(),
  provider_used: z.string(),
  status: z.string(),
  result: z.record(z.string(), z.unknown()),
});

export const ErrorEnvelopeSchema = z.object({
  error: z.object({ code: z.string(), message: z.string() }),
});

export type ExerciseSummary = z.infer<typeof ExerciseSummarySchema>;
export type Exercise = z.infer<typeof ExerciseSchema>;
export type ExerciseWord = z.infer<typeof ExerciseWordSchema>;
export type ValidationReport = z.infer<typeof ValidationReportSchema>;
export type PhonemeRow = z.infer<typeof PhonemeRowSchema>;
export type WordAnalysis = z.infer<typeof WordAnalysisSchema>;
export type FeedbackCard = z.infer<typeof FeedbackCardSchema>;
export type AnalysisResult = z.infer<typeof AnalysisResultSchema>;
export type AttemptAccepted = z.infer<typeof AttemptAcceptedSchema>;
export type AttemptRejected = z.infer<typeof AttemptRejectedSchema>;
export type AttemptRecord = z.infer<typeof AttemptRecordSchema>;

export const KNOWN_CARD_KINDS = [
  "segmental_word",
  "minimal_pair",
  "word_stress",
  "sentence_stress",
  "breath_groups",
] as const;

export type KnownCardKind = (typeof KNOWN_CARD_KINDS)[number];

export function isKnownCardKind(kind: string): kind is KnownCardKind {
  return (KNOWN_CARD_KINDS as readonly string[]).includes(kind);
}
