import { ApiClient } from './api.js';
import { CalendarDay, RequestFailed, WishScope } from './types.js';
import { VNode, h } from './vdom.js';

/** The wish dialog for one selected day. Scope availability follows the
 * calendar rules the server enforces: part-day only on work weekends, no
 * submission at all on free weekends. There is deliberately no field for a
 * justification; reasons belong in conversation, not in the system. */
export interface ScopeOption {
  scope: WishScope;
  label: string;
  disabled: boolean;
}

export interface WishDialogModel {
  date: string;
  scopes: ScopeOption[];
  submittable: boolean;
  quotaRemaining: number;
  examples: string[];
  notice: string | null;
}

export function buildWishDialog(
  day: CalendarDay,
  quotaRemaining: number,
  examples: string[],
): WishDialogModel {
  const onWeekend = day.weekend_status !== 'weekday';
  const onFreeWeekend = day.weekend_status === 'free_weekend';
  const scopes: ScopeOption[] = [
    { scope: 'morning', label: 'Free morning shift', disabled: onFreeWeekend },
    { scope: 'afternoon', label: 'Free afternoon shift', disabled: onFreeWeekend },
    { scope: 'whole_day', label: 'Whole day', disabled: onWeekend },
  ];
  let notice: string | null = null;
  if (onFreeWeekend) {
    notice = 'This weekend is already free for you.';
  } else if (onWeekend) {
    notice = 'On work weekends you can wish a free morning or afternoon.';
  }
  return {
    date: day.date,
    scopes,
    submittable: !onFreeWeekend && quotaRemaining > 0,
    quotaRemaining,
    examples,
    notice,
  };
}

export interface WishSubmitResult {
  ok: boolean;
  wishId?: string;
  error?: string;
  message?: string;
  remaining?: number;
}

export async function submitWish(
  api: ApiClient,
  month: string,
  model: WishDialogModel,
  scope: WishScope,
): Promise<WishSubmitResult> {
  try {
    const wish = await api.submitWish(month, model.date, scope);
    return { ok: true, wishId: wish.wish_id };
  } catch (err) {
    if (err instanceof RequestFailed) {
      return {
        ok: false,
        error: err.body.error,
        message: err.body.detail,
        remaining: err.body.remaining,
      };
    }
    throw err;
  }
}

export function renderWishDialog(
  model: WishDialogModel,
  onPick?: (scope: WishScope) => void,
): VNode {
  const children: (VNode | string)[] = [
    h('h2', {}, [`Wish for ${model.date}`]),
    h('p', { class: 'quota' }, [`${model.quotaRemaining} wishes remaining this month`]),
  ];
  if (model.notice) {
    children.push(h('p', { class: 'notice' }, [model.notice]));
  }
  children.push(
    h(
      'div',
      { class: 'scopes' },
      model.scopes.map((option) =>
        h(
          'button',
          {
            class: 'scope',
            'data-scope': option.scope,
            ...(option.disabled || !model.submittable ? { disabled: 'disabled' } : {}),
          },
          [option.label],
          option.disabled || !model.submittable || !onPick
            ? undefined
            : () => onPick(option.scope),
        ),
      ),
    ),
  );
  if (model.examples.length) {
    children.push(
      h('p', { class: 'examples' }, [
        'Plenty of things are worth a wish: ' + model.examples.join(', ') + '.',
      ]),
    );
  }
  return h('div', { class: 'wish-dialog' }, children);
}

export function renderWishError(result: WishSubmitResult): VNode {
  const lines: (VNode | string)[] = [h('p', { class: 'error' }, [result.message ?? ''])];
  if (result.error === 'QuotaExceeded') {
    lines.push(h('p', { class: 'quota' }, [`${result.remaining ?? 0} remaining`]));
  }
  return h('div', { class: 'wish-error', 'data-error': result.error ?? '' }, lines);
}
