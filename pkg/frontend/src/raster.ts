import { BLACK, RGB, WHITE } from "./colors";
import { GLYPH_HEIGHT, GLYPH_SPACING, GLYPH_WIDTH, glyphFor, textWidth } from "./font";

/** Software RGBA canvas; every drawing op is integer-deterministic. */
export class Raster {
  readonly width: number;
  readonly height: number;
  readonly data: Uint8Array;

  constructor(width: number, height: number, background: RGB = WHITE) {
    this.width = width;
    this.height = height;
    this.data = new Uint8Array(width * height * 4);
    this.fillRect(0, 0, width, height, background);
  }

  set(x: number, y: number, color: RGB): void {
    if (x < 0 || y < 0 || x >= this.width || y >= this.height) return;
    const i = (y * this.width + x) * 4;
    this.data[i] = color[0];
    this.data[i + 1] = color[1];
    this.data[i + 2] = color[2];
    this.data[i + 3] = 255;
  }

  get(x: number, y: number): RGB {
    const i = (y * this.width + x) * 4;
    return [this.data[i], this.data[i + 1], this.data[i + 2]];
  }

  fillRect(x: number, y: number, w: number, h: number, color: RGB): void {
    const x1 = Math.max(0, x);
    const y1 = Math.max(0, y);
    const x2 = Math.min(this.width, x + w);
    const y2 = Math.min(this.height, y + h);
    for (let yy = y1; yy < y2; yy++) {
      for (let xx = x1; xx < x2; xx++) {
        this.set(xx, yy, color);
      }
    }
  }

  strokeRect(x: number, y: number, w: number, h: number, color: RGB): void {
    this.drawLine(x, y, x + w - 1, y, color);
    this.drawLine(x, y + h - 1, x + w - 1, y + h - 1, color);
    this.drawLine(x, y, x, y + h - 1, color);
    this.drawLine(x + w - 1, y, x + w - 1, y + h - 1, color);
  }

  /** Diagonal stripes over a filled rectangle (the "conditional" texture). */
  hatchRect(x: number, y: number, w: number, h: number, color: RGB, period = 5): void {
    for (let yy = y; yy < y + h; yy++) {
      for (let xx = x; xx < x + w; xx++) {
        if ((xx + yy) % period === 0) this.set(xx, yy, color);
      }
    }
  }

  /** Bresenham line. */
  drawLine(x0: number, y0: number, x1: number, y1: number, color: RGB): void {
    let [x, y] = [Math.round(x0), Math.round(y0)];
    const [ex, ey] = [Math.round(x1), Math.round(y1)];
    const dx = Math.abs(ex - x);
    const dy = -Math.abs(ey - y);
    const sx = x < ex ? 1 : -1;
    const sy = y < ey ? 1 : -1;
    let err = dx + dy;
    for (;;) {
      this.set(x, y, color);
      if (x === ex && y === ey) break;
      const e2 = 2 * err;
      if (e2 >= dy) {
        err += dy;
        x += sx;
      }
      if (e2 <= dx) {
        err += dx;
        y += sy;
      }
    }
  }

  drawLineThick(x0: number, y0: number, x1: number, y1: number, color: RGB): void {
    this.drawLine(x0, y0, x1, y1, color);
    this.drawLine(x0, y0 + 1, x1, y1 + 1, color);
  }

  drawMarker(x: number, y: number, color: RGB, radius = 2): void {
    this.fillRect(x - radius, y - radius, 2 * radius + 1, 2 * radius + 1, color);
  }

  drawText(x: number, y: number, text: string, color: RGB = BLACK, scale = 1): void {
    let cx = x;
    for (const ch of text) {
      const cols = glyphFor(ch);
      for (let col = 0; col < GLYPH_WIDTH; col++) {
        const bits = cols[col];
        for (let row = 0; row < GLYPH_HEIGHT; row++) {
          if ((bits >> row) & 1) {
            this.fillRect(cx + col * scale, y + row * scale, scale, scale, color);
          }
        }
      }
      cx += (GLYPH_WIDTH + GLYPH_SPACING) * scale;
    }
  }

  drawTextCentered(cx: number, y: number, text: string, color: RGB = BLACK, scale = 1): void {
    this.drawText(cx - Math.floor(textWidth(text, scale) / 2), y, text, color, scale);
  }
}
