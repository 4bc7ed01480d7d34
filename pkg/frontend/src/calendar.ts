import { CalendarData, CalendarDay } from './types.js';
import { VNode, h } from './vdom.js';

/** What one calendar cell shows. Everything comes straight from the API
 * response for the authenticated user: the client adds no counting or
 * conflict logic of its own. */
export interface CalendarCell {
  date: string;
  dayOfMonth: number;
  wishCount: number;
  ownWish: boolean;
  ownScopes: string[];
  conflict: boolean;
  band: 'none' | 'low' | 'high';
  weekendStatus: string;
}

export interface CalendarViewModel {
  month: string;
  phase: string;
  releaseDate: string;
  quotaRemaining: number;
  cells: CalendarCell[];
}

export interface CalendarOptions {
  /** busy-day color bands; on by default, can be switched off */
  showBands?: boolean;
}

export function buildCalendarViewModel(data: CalendarData): CalendarViewModel {
  return {
    month: data.month,
    phase: data.phase,
    releaseDate: data.release_date,
    quotaRemaining: data.quota_remaining,
    cells: data.days.map((day: CalendarDay) => ({
      date: day.date,
      dayOfMonth: Number(day.date.slice(8)),
      wishCount: day.wish_count,
      ownWish: day.own_wishes.length > 0,
      ownScopes: day.own_wishes.map((w) => w.scope),
      conflict: day.conflict,
      band: day.band,
      weekendStatus: day.weekend_status,
    })),
  };
}

export const WARNING_SIGN = '⚠';

export function renderCalendar(
  vm: CalendarViewModel,
  onDayClick?: (cell: CalendarCell) => void,
  options: CalendarOptions = {},
): VNode {
  const showBands = options.showBands !== false;
  const cells = vm.cells.map((cell) => {
    const classes = ['day'];
    if (showBands && cell.band !== 'none') {
      classes.push(`band-${cell.band}`);
    }
    if (cell.weekendStatus !== 'weekday') {
      classes.push(cell.weekendStatus.replace('_', '-'));
    }
    const children: (VNode | string)[] = [
      h('span', { class: 'day-number' }, [String(cell.dayOfMonth)]),
      h('span', { class: 'wish-count' }, [cell.wishCount ? String(cell.wishCount) : '']),
    ];
    if (cell.ownWish) {
      // the caller's own wishes carry their profile marker
      children.push(h('span', { class: 'own-wish', title: cell.ownScopes.join(', ') }, ['●']));
    }
    if (cell.conflict) {
      // red triangular warning sign, only on the caller's own conflicts
      children.push(h('span', { class: 'conflict-warning' }, [WARNING_SIGN]));
    }
    return h(
      'td',
      { class: classes.join(' '), 'data-date': cell.date },
      children,
      onDayClick ? () => onDayClick(cell) : undefined,
    );
  });

  const weeks: VNode[] = [];
  for (let i = 0; i < cells.length; i += 7) {
    weeks.push(h('tr', {}, cells.slice(i, i + 7)));
  }
  return h('table', { class: 'calendar', 'data-month': vm.month }, [
    h('caption', {}, [`${vm.month} — plan due ${vm.releaseDate}`]),
    h('tbody', {}, weeks),
  ]);
}
