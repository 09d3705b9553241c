import { describe, expect, it } from "vitest";

import { decodeP6, decodeScreenPayload, pixelAt } from "../src/screen.js";

function p6(width: number, height: number, rgb: number[]): Uint8Array {
  const header = `P6\n${width} ${height}\n255\n`;
  const bytes = new Uint8Array(header.length + rgb.length);
  for (let i = 0; i < header.length; i++) {
    bytes[i] = header.charCodeAt(i);
  }
  bytes.set(rgb, header.length);
  return bytes;
}

describe("decodeP6", () => {
  it("expands RGB to opaque RGBA", () => {
    const image = decodeP6(p6(2, 1, [255, 0, 0, 0, 0, 255]));
    expect(image.width).toBe(2);
    expect(image.height).toBe(1);
    expect(Array.from(image.rgba)).toEqual(
      [255, 0, 0, 255, 0, 0, 255, 255]);
    expect(pixelAt(image, 0, 0)).toEqual([255, 0, 0]);
    expect(pixelAt(image, 1, 0)).toEqual([0, 0, 255]);
  });

  it("round-trips through base64", () => {
    const raw = p6(1, 2, [1, 2, 3, 4, 5, 6]);
    const b64 = Buffer.from(raw).toString("base64");
    const image = decodeScreenPayload(b64);
    expect(pixelAt(image, 0, 0)).toEqual([1, 2, 3]);
    expect(pixelAt(image, 0, 1)).toEqual([4, 5, 6]);
  });

  it("rejects non-P6 payloads", () => {
    const bogus = new Uint8Array([80, 53, 10, 49, 32, 49, 10]); // "P5..."
    expect(() => decodeP6(bogus)).toThrow();
  });
});
