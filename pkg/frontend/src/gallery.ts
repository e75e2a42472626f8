// Bottom panel: ranked preview cards with energy badges.

import type { RankingEntry } from './types.js';

export interface Gallery {
  render(entries: RankingEntry[], selected: string | null): void;
  onSelect(cb: (shapeId: string) => void): void;
}

export function createGallery(container: HTMLElement): Gallery {
  let selectCb: (shapeId: string) => void = () => undefined;

  return {
    render(entries, selected) {
      container.replaceChildren();
      entries.forEach((entry, i) => {
        const card = document.createElement('button');
        card.className = 'preview-card' + (entry.shape_id === selected ? ' selected' : '');
        card.dataset.shapeId = entry.shape_id;

        const rank = document.createElement('span');
        rank.className = 'rank';
        rank.textContent = `#${i + 1}`;

        const name = document.createElement('span');
        name.className = 'name';
        name.textContent = entry.shape_id;

        const badge = document.createElement('span');
        badge.className = 'energy';
        badge.textContent = `E ${entry.energy.toFixed(3)}`;

        card.append(rank, name, badge);
        card.addEventListener('click', () => selectCb(entry.shape_id));
        container.appendChild(card);
      });
    },
    onSelect(cb) {
      selectCb = cb;
    },
  };
}
