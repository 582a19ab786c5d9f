// DOM rendering. Pure functions from gateway payloads to elements: the UI
// renders fields, it never recomputes scores.

import {
  AnalysisResult,
  Exercise,
  FeedbackCard,
  KnownCardKind,
  ValidationReport,
  isKnownCardKind,
} from "./models.js";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function groupEndWords(exercise: Exercise): Set<number> {
  const ends = new Set<number>();
  for (const [, last] of exercise.breath_groups.slice(0, -1)) ends.add(last);
  return ends;
}

export function renderExerciseView(
  root: HTMLElement,
  exercise: Exercise,
  options: { referenceAvailable?: boolean } = {},
): void {
  root.replaceChildren();
  const view = el("section", "exercise-view");
  view.appendChild(el("h2", "utterance", exercise.text));

  const guide = el("div", "pronunciation-guide");
  const ends = groupEndWords(exercise);
  exercise.words.forEach((word, w) => {
    const block = el("div", "word-block");
    block.dataset.wordIndex = String(w);
    const label = el("div", "word-text", word.text);
    if (exercise.sentence_stress_words.includes(w)) label.classList.add("sentence-stressed");
    block.appendChild(label);
    const chips = el("div", "phoneme-chips");
    word.phonemes.forEach((symbol, p) => {
      const chip = el("span", "chip", symbol);
      const inStressed = word.syllables[word.primary_stress];
      if (inStressed && p >= inStressed[0] && p <= inStressed[1] && word.syllables.length > 1) {
        chip.classList.add("stressed");
      }
      chips.appendChild(chip);
    });
    block.appendChild(chips);
    guide.appendChild(block);
    if (ends.has(w)) {
      guide.appendChild(el("span", "breath-separator", "‖"));
    }
  });
  view.appendChild(guide);

  const reference = el("div", "reference-audio");
  const playButton = el("button", "play-reference", "Play reference");
  const available = options.referenceAvailable ?? exercise.reference_audio.length > 0;
  if (!available) {
    playButton.disabled = true;
    playButton.title = "No reference recording available";
  } else {
    const audio = el("audio") as HTMLAudioElement;
    audio.src = exercise.reference_audio[0] ?? "";
    reference.appendChild(audio);
    playButton.addEventListener("click", () => void audio.play());
  }
  reference.appendChild(playButton);
  view.appendChild(reference);
  root.appendChild(view);
}

const GUIDANCE: Record<string, string> = {
  duration:
    "That attempt was too short or too long for this sentence. Try again at a natural pace.",
  voicing: "We could not hear your voice. Check the microphone and speak up a little.",
  proximity:
    "That did not sound like the expected sentence. Read the text on screen and try again.",
};

export function renderValidationGuidance(
  root: HTMLElement,
  validation: ValidationReport,
  onRetry?: () => void,
): void {
  root.replaceChildren();
  const banner = el("section", "validation-guidance");
  const failed = validation.failed_code ?? "unknown";
  banner.appendChild(el("h3", "guidance-title", `Check failed: ${failed}`));
  banner.appendChild(
    el("p", "guidance-text", GUIDANCE[failed] ?? "The recording could not be analyzed."),
  );
  const retry = el("button", "retry-button", "Record again");
  if (onRetry) retry.addEventListener("click", onRetry);
  banner.appendChild(retry);
  root.appendChild(banner);
}

function posteriorBar(label: string, value: number): HTMLElement {
  const wrap = el("div", "posterior-bar");
  wrap.appendChild(el("span", "posterior-label", `${label} ${(value * 100).toFixed(0)}%`));
  const track = el("div", "bar-track");
  const fill = el("div", "bar-fill");
  fill.style.width = `${Math.round(Math.max(0, Math.min(1, value)) * 100)}%`;
  track.appendChild(fill);
  wrap.appendChild(track);
  return wrap;
}

function renderWordTable(analysis: AnalysisResult): HTMLElement {
  const container = el("div", "word-tables");
  const firstStart = analysis.words[0]?.phonemes[0]?.start_ms ?? 0;
  const lastEnd =
    analysis.words.at(-1)?.phonemes.at(-1)?.end_ms ?? firstStart + 1;
  const span = Math.max(1, lastEnd - firstStart);

  for (const word of analysis.words) {
    const block = el("div", "word-result");
    block.dataset.wordIndex = String(word.word_index);
    block.appendChild(el("div", "word-text", word.text));

    const chips = el("div", "phoneme-chips");
    for (const row of word.phonemes) {
      const chip = el("span", `chip verdict-${row.verdict}`, row.expected);
      chip.title =
        row.verdict === "correct"
          ? `heard ${row.predicted}`
          : `expected ${row.expected}, heard ${row.predicted}`;
      const detail = el("div", "chip-detail");
      detail.appendChild(el("div", "timing", `${row.start_ms}-${row.end_ms} ms`));
      detail.appendChild(posteriorBar(`expected ${row.expected}`, row.expected_posterior));
      detail.appendChild(posteriorBar(`heard ${row.predicted}`, row.predicted_posterior));
      if (row.substituted_by) {
        detail.appendChild(el("div", "substitution", `sounded like ${row.substituted_by}`));
      }
      chip.appendChild(detail);
      chips.appendChild(chip);
    }
    block.appendChild(chips);

    const timeline = el("div", "timeline");
    for (const row of word.phonemes) {
      const seg = el("div", "timeline-segment", row.expected);
      seg.classList.add(`verdict-${row.verdict}`);
      seg.style.left = `${(100 * (row.start_ms - firstStart)) / span}%`;
      seg.style.width = `${(100 * (row.end_ms - row.start_ms)) / span}%`;
      timeline.appendChild(seg);
    }
    block.appendChild(timeline);
    container.appendChild(block);
  }
  return container;
}

function knownCardBody(kind: KnownCardKind, card: FeedbackCard): HTMLElement {
  const body = el("div", "card-body");
  const detail = card.detail as Record<string, unknown>;
  switch (kind) {
    case "segmental_word": {
      const wrong = (detail.wrong_phonemes as string[] | undefined) ?? [];
      body.appendChild(
        el(
          "p",
          "card-line",
          wrong.length
            ? `Sounds to revisit in “${String(detail.word)}”: ${wrong.join(", ")}`
            : `Every sound in “${String(detail.word)}” was on target.`,
        ),
      );
      break;
    }
    case "minimal_pair": {
      body.appendChild(
        el(
          "p",
          "card-line",
          `${String(detail.target)} vs ${String(detail.contrast)} — winner: ${String(detail.winner)}`,
        ),
      );
      body.appendChild(posteriorBar(String(detail.target), Number(detail.target_mean)));
      body.appendChild(posteriorBar(String(detail.contrast), Number(detail.contrast_mean)));
      break;
    }
    case "word_stress": {
      body.appendChild(
        el(
          "p",
          "card-line",
          `Stress heard on syllable ${Number(detail.detected_syllable) + 1}, ` +
            `expected syllable ${Number(detail.expected_syllable) + 1} of “${String(detail.word)}”.`,
        ),
      );
      break;
    }
    case "sentence_stress": {
      const missed = (detail.missed_words as number[] | undefined) ?? [];
      body.appendChild(
        el(
          "p",
          "card-line",
          missed.length
            ? `Words that needed more emphasis: ${missed.join(", ")}`
            : "Sentence emphasis landed on the right words.",
        ),
      );
      break;
    }
    case "breath_groups": {
      const missed = (detail.missed_boundaries as number[] | undefined) ?? [];
      const spurious = (detail.spurious_pauses as number[] | undefined) ?? [];
      const lines: string[] = [];
      if (missed.length) lines.push(`Missed pause after word ${missed.join(", after word ")}.`);
      if (spurious.length)
        lines.push(`Unexpected pause after word ${spurious.join(", after word ")}.`);
      if (!lines.length) lines.push("Pausing matched the scripted thought groups.");
      for (const line of lines) body.appendChild(el("p", "card-line", line));
      break;
    }
    default: {
      const exhaustive: never = kind;
      throw new Error(`unhandled card kind ${exhaustive as string}`);
    }
  }
  const advice = detail.advice;
  if (typeof advice === "string" && advice) {
    body.appendChild(el("p", "card-advice", advice));
  }
  return body;
}

export function renderCard(card: FeedbackCard): HTMLElement {
  const node = el("article", `card card-${card.kind} status-${card.status}`);
  node.dataset.kind = card.kind;
  node.dataset.adviceKey = card.advice_key;
  if (card.word_index !== null) node.dataset.wordIndex = String(card.word_index);
  const title = card.kind.replace(/_/g, " ");
  node.appendChild(el("h4", "card-title", `${title} — ${card.status === "good" ? "✓" : "needs work"}`));
  if (isKnownCardKind(card.kind)) {
    node.appendChild(knownCardBody(card.kind, card));
  } else {
    // unknown kinds are surfaced raw, never dropped
    const raw = el("pre", "card-raw", JSON.stringify(card.detail, null, 2));
    node.appendChild(raw);
  }
  return node;
}

export function renderFeedbackView(root: HTMLElement, analysis: AnalysisResult): void {
  root.replaceChildren();
  const view = el("section", "feedback-view");
  const allGood = analysis.cards.every((c) => c.status === "good");
  if (allGood) {
    const banner = el("div", "celebrate", "Great attempt! Everything checks out.");
    banner.appendChild(el("button", "next-exercise", "Next exercise"));
    view.appendChild(banner);
  }
  view.appendChild(renderWordTable(analysis));
  const deck = el("div", "card-deck");
  for (const card of analysis.cards) deck.appendChild(renderCard(card));
  view.appendChild(deck);
  root.appendChild(view);
}

export interface HistoryEntry {
  attemptId: string;
  exerciseId: string;
  status: string;
  receivedAt: string;
}

export function renderHistory(root: HTMLElement, entries: HistoryEntry[]): void {
  root.replaceChildren();
  const list = el("ul", "attempt-history");
  for (const entry of entries) {
    const item = el(
      "li",
      `history-item history-${entry.status}`,
      `${entry.receivedAt} · ${entry.exerciseId} · ${entry.status}`,
    );
    item.dataset.attemptId = entry.attemptId;
    list.appendChild(item);
  }
  root.appendChild(list);
}

export function renderErrorBanner(root: HTMLElement, message: string, onRetry?: () => void): void {
  root.replaceChildren();
  const banner = el("div", "error-banner");
  banner.appendChild(el("p", "error-text", message));
  const retry = el("button", "retry-button", "Try again");
  if (onRetry) retry.addEventListener("click", onRetry);
  banner.appendChild(retry);
  root.appendChild(banner);
}
