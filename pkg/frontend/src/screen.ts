/** Decoding of the composited screen payload (binary P6 over base64). */

export interface ScreenImage {
  width: number;
  height: number;
  /** RGBA, row-major, ready for ImageData */
  rgba: Uint8ClampedArray<ArrayBuffer>;
}

export function base64ToBytes(b64: string): Uint8Array {
  if (typeof atob === "function") {
    const bin = atob(b64);
    const out = new Uint8Array(bin.length);
    for (let i = 0; i < bin.length; i++) {
      out[i] = bin.charCodeAt(i);
    }
    return out;
  }
  // node test environment (no atob); avoid a hard Buffer type dependency
  const nodeBuffer =
    (globalThis as Record<string, any>)["Buffer"];
  return new Uint8Array(nodeBuffer.from(b64, "base64"));
}

export function decodeP6(payload: Uint8Array): ScreenImage {
  // header: "P6\n<w> <h>\n<maxval>\n", single whitespace separators
  let pos = 0;
  const token = (): string => {
    while (payload[pos] === 0x20 || payload[pos] === 0x0a) {
      pos++;
    }
    let out = "";
    while (pos < payload.length && payload[pos] !== 0x20 &&
           payload[pos] !== 0x0a) {
      out += String.fromCharCode(payload[pos]);
      pos++;
    }
    return out;
  };
  if (token() !== "P6") {
    throw new Error("not a P6 pixmap");
  }
  const width = Number(token());
  const height = Number(token());
  const maxval = Number(token());
  if (!width || !height || maxval !== 255) {
    throw new Error("unsupported P6 geometry");
  }
  pos++; // single whitespace after maxval
  const rgba = new Uint8ClampedArray(width * height * 4);
  for (let i = 0; i < width * height; i++) {
    rgba[i * 4] = payload[pos + i * 3];
    rgba[i * 4 + 1] = payload[pos + i * 3 + 1];
    rgba[i * 4 + 2] = payload[pos + i * 3 + 2];
    rgba[i * 4 + 3] = 255;
  }
  return { width, height, rgba };
}

export function decodeScreenPayload(b64: string): ScreenImage {
  return decodeP6(base64ToBytes(b64));
}

export function pixelAt(image: ScreenImage, x: number,
                        y: number): [number, number, number] {
  const i = (y * image.width + x) * 4;
  return [image.rgba[i], image.rgba[i + 1], image.rgba[i + 2]];
}
