/** Client-side number formatting for panel display.
 *
 * Pure presentation: switching the panel base re-renders values the
 * server already sent, no protocol traffic involved.
 */

import type { Base } from "./protocol.js";

export function formatValue(value: number, widthBits: number,
                            base: Base): string {
  const wide = BigInt.asUintN(widthBits, BigInt(value));
  switch (base) {
    case "bin":
      return wide.toString(2).padStart(widthBits, "0");
    case "oct":
      return wide.toString(8).padStart(Math.ceil(widthBits / 3), "0");
    case "hex":
      return wide.toString(16).toUpperCase().padStart(widthBits / 4, "0");
    case "udec":
      return wide.toString(10);
    case "sdec":
      return BigInt.asIntN(widthBits, wide).toString(10);
    case "bcd": {
      let out = "";
      for (let shift = widthBits - 4; shift >= 0; shift -= 4) {
        const nibble = Number((wide >> BigInt(shift)) & 0xfn);
        out += nibble <= 9 ? String(nibble) : "?";
      }
      return out;
    }
  }
}

export const BASES: Base[] = ["bin", "oct", "udec", "sdec", "bcd", "hex"];
