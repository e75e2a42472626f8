// Side controls: preset pose buttons and semantic attribute sliders.

import type { AvatarEdit, Presets } from './types.js';

// sliders are exposed per side-less bone group; edits fan out to both sides
const SLIDER_BONES: [string, string, number, number][] = [
  // label, bone tag base, min, max (lengths in meters)
  ['Body length', 'body-bone', 0.12, 0.40],
  ['Hip width', 'body-bone:width', 0.25, 0.60],
  ['Upper leg', 'upper-leg', 0.25, 0.70],
  ['Lower leg', 'lower-leg', 0.25, 0.70],
  ['Upper arm', 'upper-arm', 0.18, 0.45],
  ['Lower arm', 'lower-arm', 0.15, 0.40],
];

export interface Controls {
  render(presets: Presets, current: Record<string, { length: number; width: number }>): void;
  onEdit(cb: (edit: AvatarEdit) => void): void;
  showError(message: string | null): void;
}

export function createControls(container: HTMLElement): Controls {
  let editCb: (edit: AvatarEdit) => void = () => undefined;
  const banner = document.createElement('div');
  banner.className = 'error-banner hidden';

  const sliderValue = (spec: string, attrs: Record<string, { length: number; width: number }>) => {
    const [tag, field = 'length'] = spec.split(':');
    const side = attrs[`${tag}-l`] ?? attrs[tag];
    return field === 'width' ? side.width : side.length;
  };

  return {
    render(presets, attrs) {
      container.replaceChildren(banner);

      const poseRow = document.createElement('div');
      poseRow.className = 'pose-row';
      for (const pose of presets.poses) {
        const btn = document.createElement('button');
        btn.textContent = pose.replace('_', ' ');
        btn.addEventListener('click', () => editCb({ pose: { name: pose } }));
        poseRow.appendChild(btn);
      }
      container.appendChild(poseRow);

      for (const [label, spec, min, max] of SLIDER_BONES) {
        const [tag, field = 'length'] = spec.split(':');
        const row = document.createElement('label');
        row.className = 'slider-row';
        const caption = document.createElement('span');
        const value = sliderValue(spec, attrs);
        caption.textContent = `${label} (${value.toFixed(2)} m)`;
        const input = document.createElement('input');
        input.type = 'range';
        input.min = String(min);
        input.max = String(max);
        input.step = '0.005';
        input.value = String(value);
        input.addEventListener('input', () => {
          const v = Number(input.value);
          caption.textContent = `${label} (${v.toFixed(2)} m)`;
          const attributes: AvatarEdit['attributes'] = {};
          const targets = tag.endsWith('-bone') ? [tag] : [`${tag}-l`, `${tag}-r`];
          for (const t of targets) attributes[t] = { [field]: v };
          editCb({ attributes });
        });
        row.append(caption, input);
        container.appendChild(row);
      }
    },
    onEdit(cb) {
      editCb = cb;
    },
    showError(message) {
      banner.classList.toggle('hidden', message === null);
      banner.textContent = message ?? '';
    },
  };
}
