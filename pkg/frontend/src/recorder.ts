// Recording sits behind a tiny interface so the app logic is testable without
// a microphone: tests inject a scripted recorder that "records" fixed samples.

export interface Recording {
  samples: Float32Array;
  sampleRate: number;
}

export interface Recorder {
  start(): Promise<void>;
  stop(): Promise<Recording>;
}

export type RecorderFactory = () => Recorder;

/** Captures microphone audio as Float32 chunks via a script processor node. */
export class MicRecorder implements Recorder {
  private context: AudioContext | null = null;
  private stream: MediaStream | null = null;
  private processor: ScriptProcessorNode | null = null;
  private chunks: Float32Array[] = [];

  async start(): Promise<void> {
    this.stream = await navigator.mediaDevices.getUserMedia({ audio: true });
    this.context = new AudioContext();
    const source = this.context.createMediaStreamSource(this.stream);
    this.processor = this.context.createScriptProcessor(4096, 1, 1);
    this.chunks = [];
    this.processor.onaudioprocess = (event) => {
      this.chunks.push(new Float32Array(event.inputBuffer.getChannelData(0)));
    };
    source.connect(this.processor);
    this.processor.connect(this.context.destination);
  }

  async stop(): Promise<Recording> {
    const context = this.context;
    if (!context) throw new Error("recorder was never started");
    this.processor?.disconnect();
    this.stream?.getTracks().forEach((track) => track.stop());
    const sampleRate = context.sampleRate;
    await context.close();
    const total = this.chunks.reduce((n, c) => n + c.length, 0);
    const samples = new Float32Array(total);
    let offset = 0;
    for (const chunk of this.chunks) {
      samples.set(chunk, offset);
      offset += chunk.length;
    }
    this.context = null;
    this.stream = null;
    this.processor = null;
    this.chunks = [];
    return { samples, sampleRate };
  }
}

/** A recorder that plays back pre-baked samples; for tests and demos. */
export function scriptedRecorder(samples: Float32Array, sampleRate: number): Recorder {
  let started = false;
  return {
    async start() {
      started = true;
    },
    async stop() {
      if (!started) throw new Error("recorder was never started");
      return { samples, sampleRate };
    },
  };
}
